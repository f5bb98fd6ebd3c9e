#include <mcgip/io.h>

#include <mcgip/errors.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mcgip::io {

namespace {

std::string fmt_g(double v, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig, v);
    std::string s = buf;
    if (s.find_first_of(".eEnN") == std::string::npos)
        s += ".0";
    return s;
}

double parse_double(std::string_view tok, const std::string& file, long line) {
    double v = 0.0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw DataError(file, line, "expected a number, got '" + std::string(tok) + "'");
    return v;
}

long parse_long(std::string_view tok, const std::string& file, long line) {
    long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw DataError(file, line, "expected an integer, got '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError(path, 0, "cannot open for reading");
    return in;
}

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode = std::ios_base::out) {
    std::ofstream out(path, mode);
    if (!out)
        throw DataError(path, 0, "cannot open for writing");
    return out;
}

void write_cfg(std::ofstream& out, const ConfigEcho& cfg) {
    for (const auto& [k, v] : cfg)
        out << "# cfg " << k << "=" << v << "\n";
}

bool is_comment(const std::string& line) {
    return !line.empty() && line[0] == '#';
}

// header form: `#<tag> v1 <id> <dim1> <dim2>`
struct Header {
    std::string id;
    long dim1 = 0;
    long dim2 = 0;
};

Header parse_header(const std::string& line, const std::string& tag, const std::string& path) {
    std::istringstream ss(line);
    std::string got_tag, version;
    Header h;
    if (!(ss >> got_tag >> version >> h.id >> h.dim1 >> h.dim2) || got_tag != "#" + tag ||
        version != "v1")
        throw DataError(path, 1, "expected header '#" + tag + " v1 <id> <dim> <dim>'");
    std::string rest;
    if (ss >> rest)
        throw DataError(path, 1, "trailing tokens after header");
    if (h.dim1 <= 0 || h.dim2 <= 0)
        throw DataError(path, 1, "header dimensions must be positive");
    return h;
}

} // namespace

std::string fmt_double(double v, int sig_digits) { return fmt_g(v, sig_digits); }
std::string fmt_double9(double v) { return fmt_g(v, 9); }

std::string fmt_double_exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEnN") == std::string::npos)
        s += ".0";
    return s;
}

// ---------------------------------------------------------------------------
// gaze recordings
// ---------------------------------------------------------------------------

GazeRecording read_gaze_recording(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError(path, 1, "missing header");
    const Header h = parse_header(line, "gazerec", path);

    std::vector<GazeSample> samples;
    long line_no = 1;
    double prev_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        const auto toks = split(line, ',');
        if (toks.size() != 3)
            throw DataError(path, line_no, "expected 'timestamp_ms,x_px,y_px'");
        GazeSample s;
        s.t_ms = parse_double(toks[0], path, line_no);
        s.x = parse_double(toks[1], path, line_no);
        s.y = parse_double(toks[2], path, line_no);
        if (s.t_ms <= prev_t)
            throw DataError(path, line_no, "timestamps must be strictly increasing");
        prev_t = s.t_ms;
        samples.push_back(s);
    }
    return make_gaze_recording(h.id, static_cast<int>(h.dim1), static_cast<int>(h.dim2),
                               std::move(samples));
}

void write_gaze_recording(const std::string& path, const GazeRecording& rec,
                          const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    out << "#gazerec v1 " << rec.image_id << " " << rec.width_px << " " << rec.height_px << "\n";
    write_cfg(out, cfg);
    for (const GazeSample& s : rec.samples)
        out << fmt_double_exact(s.t_ms) << "," << fmt_double_exact(s.x) << "," << fmt_double_exact(s.y) << "\n";
}

// ---------------------------------------------------------------------------
// fixation sequences
// ---------------------------------------------------------------------------

FixationSequence read_fixseq(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError(path, 1, "missing header");
    const Header h = parse_header(line, "fixseq", path);

    FixationSequence seq;
    seq.image_id = h.id;
    seq.width_px = static_cast<int>(h.dim1);
    seq.height_px = static_cast<int>(h.dim2);
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        const auto toks = split(line, ',');
        if (toks.size() != 3)
            throw DataError(path, line_no, "expected 'x,y,duration_ms'");
        FixationPoint f;
        f.x = parse_double(toks[0], path, line_no);
        f.y = parse_double(toks[1], path, line_no);
        f.duration_ms = parse_double(toks[2], path, line_no);
        if (f.duration_ms <= 0.0)
            throw DataError(path, line_no, "fixation duration must be positive");
        if (f.x < 0.0 || f.x >= seq.width_px || f.y < 0.0 || f.y >= seq.height_px)
            throw DataError(path, line_no, "fixation outside the image extent");
        seq.fixations.push_back(f);
    }
    if (seq.fixations.empty())
        throw DataError(path, line_no, "fixation sequence is empty");
    return seq;
}

void write_fixseq(const std::string& path, const FixationSequence& seq, const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    out << "#fixseq v1 " << seq.image_id << " " << seq.width_px << " " << seq.height_px << "\n";
    write_cfg(out, cfg);
    for (const FixationPoint& f : seq.fixations)
        out << fmt_double_exact(f.x) << "," << fmt_double_exact(f.y) << ","
            << fmt_double_exact(f.duration_ms) << "\n";
}

// ---------------------------------------------------------------------------
// heatmaps
// ---------------------------------------------------------------------------

GazeHeatmap read_heatmap(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError(path, 1, "missing header");
    const Header h = parse_header(line, "heatmap", path);

    GazeHeatmap hm;
    hm.image_id = h.id;
    hm.rows = static_cast<int>(h.dim1);
    hm.cols = static_cast<int>(h.dim2);
    hm.values.reserve(static_cast<std::size_t>(hm.rows) * hm.cols);

    long line_no = 1;
    int rows_seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        std::istringstream ss(line);
        std::string tok;
        int cols_seen = 0;
        while (ss >> tok) {
            const double v = parse_double(tok, path, line_no);
            if (v < 0.0)
                throw DataError(path, line_no, "heatmap entries must be nonnegative");
            hm.values.push_back(v);
            ++cols_seen;
        }
        if (cols_seen != hm.cols)
            throw DataError(path, line_no, "expected " + std::to_string(hm.cols) + " values, got " +
                                               std::to_string(cols_seen));
        ++rows_seen;
    }
    if (rows_seen != hm.rows)
        throw DataError(path, line_no, "expected " + std::to_string(hm.rows) + " rows, got " +
                                           std::to_string(rows_seen));
    return hm;
}

void write_heatmap(const std::string& path, const GazeHeatmap& hm, const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    out << "#heatmap v1 " << hm.image_id << " " << hm.rows << " " << hm.cols << "\n";
    write_cfg(out, cfg);
    for (int r = 0; r < hm.rows; ++r) {
        for (int c = 0; c < hm.cols; ++c) {
            if (c) out << " ";
            out << fmt_double_exact(hm.at(r, c));
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// affinity CSV
// ---------------------------------------------------------------------------

AffinityMatrix read_affinity_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    long line_no = 0;

    AffinityMatrix A;
    bool have_header = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        const auto toks = split(line, ',');
        if (!have_header) {
            if (toks.size() < 2 || toks[0] != "id")
                throw DataError(path, line_no, "expected header row 'id,<id_1>,...'");
            A.ids.assign(toks.begin() + 1, toks.end());
            A.a.assign(A.ids.size() * A.ids.size(), 0.0);
            have_header = true;
            continue;
        }
        if (row >= A.ids.size())
            throw DataError(path, line_no, "more rows than ids in the header");
        if (toks.size() != A.ids.size() + 1)
            throw DataError(path, line_no, "expected " + std::to_string(A.ids.size() + 1) +
                                               " fields, got " + std::to_string(toks.size()));
        if (toks[0] != A.ids[row])
            throw DataError(path, line_no, "row id '" + toks[0] + "' does not match header order");
        for (std::size_t j = 0; j < A.ids.size(); ++j)
            A.at(row, j) = parse_double(toks[j + 1], path, line_no);
        ++row;
    }
    if (!have_header)
        throw DataError(path, line_no, "missing header row");
    if (row != A.ids.size())
        throw DataError(path, line_no, "expected " + std::to_string(A.ids.size()) + " rows, got " +
                                           std::to_string(row));
    try {
        A.validate();
    } catch (const Error& e) {
        throw DataError(path, line_no, e.what());
    }
    return A;
}

void write_affinity_csv(const std::string& path, const AffinityMatrix& A, const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    write_cfg(out, cfg);
    out << "id";
    for (const std::string& id : A.ids) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < A.size(); ++i) {
        out << A.ids[i];
        for (std::size_t j = 0; j < A.size(); ++j) out << "," << fmt_double9(A.at(i, j));
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// pairs CSV
// ---------------------------------------------------------------------------

std::vector<PairRecord> read_pairs_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    long line_no = 0;
    bool have_header = false;
    std::vector<PairRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        const auto toks = split(line, ',');
        if (!have_header) {
            if (toks.size() != 4 || toks[0] != "i" || toks[1] != "j" || toks[2] != "affinity" ||
                toks[3] != "accepted")
                throw DataError(path, line_no, "expected header 'i,j,affinity,accepted'");
            have_header = true;
            continue;
        }
        if (toks.size() != 4)
            throw DataError(path, line_no, "expected 4 fields");
        PairRecord rec;
        rec.id_i = toks[0];
        rec.id_j = toks[1];
        rec.affinity = parse_double(toks[2], path, line_no);
        const long acc = parse_long(toks[3], path, line_no);
        if (acc != 0 && acc != 1)
            throw DataError(path, line_no, "accepted flag must be 0 or 1");
        rec.accepted = acc == 1;
        records.push_back(std::move(rec));
    }
    if (!have_header)
        throw DataError(path, line_no, "missing header row");
    return records;
}

void write_pairs_csv(const std::string& path, const AffinityMatrix& A, const PairSet& pairs,
                     const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    write_cfg(out, cfg);
    out << "i,j,affinity,accepted\n";
    for (const PairEntry& e : pairs.pairs)
        out << A.ids[e.i] << "," << A.ids[e.j] << "," << fmt_double9(e.affinity) << ","
            << (e.accepted ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------
// PGM images
// ---------------------------------------------------------------------------

Image read_pgm(const std::string& path, const std::string& id) {
    std::ifstream in = open_in(path);
    std::string line;
    std::vector<long> header_nums; // width, height, maxval
    std::vector<long> pixels;
    long line_no = 0;
    bool have_magic = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        if (!have_magic) {
            if (line != "P2")
                throw DataError(path, line_no, "expected ASCII graymap magic 'P2'");
            have_magic = true;
            continue;
        }
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            const long v = parse_long(tok, path, line_no);
            if (header_nums.size() < 3)
                header_nums.push_back(v);
            else
                pixels.push_back(v);
        }
    }
    if (!have_magic || header_nums.size() < 3)
        throw DataError(path, line_no, "truncated graymap header");
    const long width = header_nums[0], height = header_nums[1], maxval = header_nums[2];
    if (width <= 0 || height <= 0 || maxval <= 0)
        throw DataError(path, line_no, "invalid graymap dimensions");
    if (static_cast<long>(pixels.size()) != width * height)
        throw DataError(path, line_no, "expected " + std::to_string(width * height) +
                                           " pixels, got " + std::to_string(pixels.size()));
    Image img;
    img.id = id;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.resize(pixels.size());
    for (std::size_t k = 0; k < pixels.size(); ++k) {
        if (pixels[k] < 0 || pixels[k] > maxval)
            throw DataError(path, line_no, "pixel value outside [0, maxval]");
        img.pixels[k] = static_cast<double>(pixels[k]) / static_cast<double>(maxval);
    }
    return img;
}

void write_pgm(const std::string& path, const Image& img, const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    out << "P2\n";
    write_cfg(out, cfg);
    out << img.width << " " << img.height << "\n255\n";
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (c) out << " ";
            const double v = std::clamp(img.at(r, c), 0.0, 1.0);
            out << static_cast<int>(std::lround(v * 255.0));
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// labels CSV
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    long line_no = 0;
    bool have_header = false;
    std::vector<std::pair<std::string, int>> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || is_comment(line)) continue;
        const auto toks = split(line, ',');
        if (!have_header) {
            if (toks.size() != 2 || toks[0] != "id" || toks[1] != "label")
                throw DataError(path, line_no, "expected header 'id,label'");
            have_header = true;
            continue;
        }
        if (toks.size() != 2)
            throw DataError(path, line_no, "expected 2 fields");
        out.emplace_back(toks[0], static_cast<int>(parse_long(toks[1], path, line_no)));
    }
    if (!have_header)
        throw DataError(path, line_no, "missing header row");
    return out;
}

void write_labels_csv(const std::string& path, const std::vector<std::pair<std::string, int>>& labels,
                      const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    write_cfg(out, cfg);
    out << "id,label\n";
    for (const auto& [id, label] : labels) out << id << "," << label << "\n";
}

// ---------------------------------------------------------------------------
// moment vectors CSV
// ---------------------------------------------------------------------------

void write_moments_csv(const std::string& path,
                       const std::vector<std::pair<std::string, MomentVector>>& rows,
                       const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    write_cfg(out, cfg);
    out << "image_id,mu00,phi1\n";
    for (const auto& [id, m] : rows)
        out << id << "," << fmt_double9(m.mu00) << "," << fmt_double9(m.phi1) << "\n";
}

// ---------------------------------------------------------------------------
// trace CSV
// ---------------------------------------------------------------------------

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const ConfigEcho& cfg) {
    std::ofstream out = open_out(path);
    write_cfg(out, cfg);
    out << "epoch,loss,mean_pair_count\n";
    for (const TraceRow& row : trace)
        out << row.epoch << "," << fmt_double9(row.loss) << "," << fmt_double9(row.mean_pair_count)
            << "\n";
}

// ---------------------------------------------------------------------------
// model weights
// ---------------------------------------------------------------------------

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::ifstream& in, const std::string& path) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
        throw DataError(path, 0, "truncated model file");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

} // namespace

void write_model(const std::string& path, const ToyEncoder& enc) {
    std::ofstream out = open_out(path, std::ios_base::out | std::ios_base::binary);
    out.write("MCGP", 4);
    put_u32(out, 1); // format version
    put_u32(out, static_cast<std::uint32_t>(enc.input_dim));
    put_u32(out, static_cast<std::uint32_t>(enc.hidden_dim));
    put_u32(out, static_cast<std::uint32_t>(enc.output_dim));
    for (double p : enc.params)
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(p)));
}

ToyEncoder read_model(const std::string& path) {
    std::ifstream in(path, std::ios_base::in | std::ios_base::binary);
    if (!in)
        throw DataError(path, 0, "cannot open for reading");
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "MCGP", 4) != 0)
        throw DataError(path, 0, "not a model file (bad magic)");
    const std::uint32_t version = get_u32(in, path);
    if (version != 1)
        throw DataError(path, 0, "unsupported model version " + std::to_string(version));
    ToyEncoder enc;
    enc.input_dim = static_cast<int>(get_u32(in, path));
    enc.hidden_dim = static_cast<int>(get_u32(in, path));
    enc.output_dim = static_cast<int>(get_u32(in, path));
    if (enc.input_dim <= 0 || enc.hidden_dim <= 0 || enc.output_dim <= 0)
        throw DataError(path, 0, "invalid model dimensions");
    enc.params.resize(enc.param_count());
    for (double& p : enc.params)
        p = static_cast<double>(std::bit_cast<float>(get_u32(in, path)));
    char extra;
    if (in.read(&extra, 1))
        throw DataError(path, 0, "trailing bytes after model weights");
    return enc;
}

ConfigEcho read_cfg_lines(const std::string& path) {
    std::ifstream in = open_in(path);
    ConfigEcho cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.starts_with("# cfg ")) continue;
        const std::string body = line.substr(6);
        const auto eq = body.find('=');
        if (eq == std::string::npos) continue;
        cfg.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    }
    return cfg;
}

} // namespace mcgip::io
