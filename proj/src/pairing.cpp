#include <mcgip/pairing.h>

#include <mcgip/errors.h>
#include <mcgip/moments.h>
#include <mcgip/rng.h>

#include <algorithm>
#include <cmath>
#include <thread>

namespace mcgip {

void AffinityMatrix::validate() const {
    const std::size_t n = ids.size();
    if (a.size() != n * n)
        throw Error("affinity matrix: storage does not match id count");
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 1.0)
            throw Error("affinity matrix: diagonal entry for '" + ids[i] + "' is not 1");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = at(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw Error("affinity matrix: entry (" + ids[i] + "," + ids[j] + ") outside [0,1]");
            if (at(i, j) != at(j, i))
                throw Error("affinity matrix: asymmetric at (" + ids[i] + "," + ids[j] + ")");
        }
    }
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "multimatch") return Scheme::MultiMatch;
    if (name == "moment") return Scheme::Moment;
    if (name == "dhash") return Scheme::DHash;
    throw Error("unknown similarity scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::MultiMatch: return "multimatch";
        case Scheme::Moment: return "moment";
        case Scheme::DHash: return "dhash";
    }
    return "?";
}

const std::string& item_id(const GazeItem& item) {
    return std::visit([](const auto& v) -> const std::string& { return v.image_id; }, item);
}

double scheme_similarity(const GazeItem& a, const GazeItem& b, Scheme scheme,
                         const SchemeParams& params) {
    if (scheme == Scheme::MultiMatch) {
        const auto* sa = std::get_if<FixationSequence>(&a);
        const auto* sb = std::get_if<FixationSequence>(&b);
        if (!sa || !sb)
            throw MixedRepresentation("multimatch scheme requires fixation sequences");
        return multimatch_similarity(*sa, *sb, params.mm_weights);
    }
    const auto* ha = std::get_if<GazeHeatmap>(&a);
    const auto* hb = std::get_if<GazeHeatmap>(&b);
    if (!ha || !hb)
        throw MixedRepresentation(scheme_name(scheme) + " scheme requires heatmaps");
    if (scheme == Scheme::Moment)
        return moment_affinity(moment_vector(*ha), moment_vector(*hb), params.alpha);
    return dhash_similarity(dhash_encode(*ha, params.dhash_direction),
                            dhash_encode(*hb, params.dhash_direction));
}

AffinityMatrix build_affinity(const std::vector<GazeItem>& items, Scheme scheme,
                              const SchemeParams& params, int jobs) {
    const std::size_t n = items.size();
    if (n == 0)
        throw Error("build_affinity: no items");
    const std::size_t rep_index = items[0].index();
    for (const GazeItem& it : items)
        if (it.index() != rep_index)
            throw MixedRepresentation("build_affinity: items mix sequence and heatmap representations");

    AffinityMatrix A;
    A.ids.reserve(n);
    for (const GazeItem& it : items) A.ids.push_back(item_id(it));
    A.a.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) A.at(i, i) = 1.0;

    // each unordered pair computed once; written to both slots
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    todo.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            todo.emplace_back(i, j);

    const auto compute = [&](std::size_t lo, std::size_t hi, std::exception_ptr& err) {
        try {
            for (std::size_t k = lo; k < hi; ++k) {
                const auto [i, j] = todo[k];
                double v;
                try {
                    v = scheme_similarity(items[i], items[j], scheme, params);
                } catch (const MixedRepresentation& e) {
                    throw MixedRepresentation("pair (" + A.ids[i] + "," + A.ids[j] + "): " + e.what());
                } catch (const Error& e) {
                    throw Error("pair (" + A.ids[i] + "," + A.ids[j] + "): " + e.what());
                }
                A.at(i, j) = v;
                A.at(j, i) = v;
            }
        } catch (...) {
            err = std::current_exception();
        }
    };

    const std::size_t workers = std::max(1, jobs);
    if (workers <= 1 || todo.size() < 2) {
        std::exception_ptr err;
        compute(0, todo.size(), err);
        if (err) std::rethrow_exception(err);
    } else {
        const std::size_t nw = std::min<std::size_t>(workers, todo.size());
        std::vector<std::exception_ptr> errs(nw);
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            const std::size_t lo = todo.size() * w / nw;
            const std::size_t hi = todo.size() * (w + 1) / nw;
            pool.emplace_back(compute, lo, hi, std::ref(errs[w]));
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errs)
            if (err) std::rethrow_exception(err);
    }
    return A;
}

double pair_uniform(std::uint64_t seed, const std::string& id1, const std::string& id2) {
    const std::string& lo = id1 <= id2 ? id1 : id2;
    const std::string& hi = id1 <= id2 ? id2 : id1;
    std::uint64_t h = fnv1a64(lo);
    h = splitmix64(h ^ 0x1f);
    h ^= fnv1a64(hi);
    h = splitmix64(h ^ splitmix64(seed));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

PairSet select_pairs(const AffinityMatrix& A, double t, double p, std::uint64_t seed) {
    PairSet ps;
    ps.threshold_t = t;
    ps.confidence_p = p;
    ps.seed = seed;
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i)
        ps.pairs.push_back({i, i, 1.0, true});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double aff = A.at(i, j);
            if (aff < t) continue;
            const bool accepted = pair_uniform(seed, A.ids[i], A.ids[j]) < p;
            ps.pairs.push_back({i, j, aff, accepted});
        }
    }
    return ps;
}

std::vector<std::pair<double, std::size_t>> pair_count_curve(const AffinityMatrix& A,
                                                             const std::vector<double>& thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw Error("pair_count_curve: thresholds must be sorted ascending");
    std::vector<std::pair<double, std::size_t>> out;
    out.reserve(thresholds.size());
    const std::size_t n = A.size();
    for (double t : thresholds) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (A.at(i, j) >= t) ++count;
        out.emplace_back(t, count);
    }
    return out;
}

} // namespace mcgip
