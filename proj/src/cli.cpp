#include <mcgip/cli.h>

#include <mcgip/contrastive.h>
#include <mcgip/errors.h>
#include <mcgip/io.h>
#include <mcgip/synth.h>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace mcgip::cli {

namespace {

constexpr const char* kTopHelp =
    "usage: mcgip <command> [options]\n"
    "\n"
    "commands:\n"
    "  fixations   detect fixations in a raw gaze recording (I-DT)\n"
    "  heatmap     render a duration-weighted gaze heatmap from fixations\n"
    "  sim         gaze similarity of two items (multimatch | moment | dhash)\n"
    "  affinity    pairwise affinity matrix over many items\n"
    "  pairs       select positive pairs from an affinity matrix (threshold t, confidence p)\n"
    "  synth       generate the two-pattern synthetic benchmark dataset\n"
    "  train       contrastive pre-training of the toy encoder with gaze pairs\n"
    "  probe       linear-probe accuracy of a trained encoder\n"
    "\n"
    "run 'mcgip <command> --help' for the flags and defaults of a command.\n";

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// `--config FILE` pre-pass: file values become defaults, explicit flags win,
// unknown keys are rejected.
void apply_config_file(const CLI::App& app, std::vector<std::string>& args) {
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config") {
            if (k + 1 >= args.size())
                throw UsageError("--config requires a file path");
            path = args[k + 1];
            break;
        }
        if (args[k].starts_with("--config=")) {
            path = args[k].substr(9);
            break;
        }
    }
    if (path.empty()) return;

    std::ifstream in(path);
    if (!in)
        throw DataError(path, 0, "cannot open config file");

    std::vector<std::string> known;
    for (const CLI::Option* opt : app.get_options())
        for (const std::string& name : opt->get_lnames()) known.push_back(name);

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw DataError(path, line_no, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw UsageError("config file " + path + ":" + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        const std::string flag = "--" + key;
        bool given = false;
        for (const std::string& a : args)
            if (a == flag || a.starts_with(flag + "=")) given = true;
        if (!given) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
}

/// Parses args into the app; returns -1 to continue, or an exit status
/// (help requested). CLI::ParseError propagates to run_command.
int parse_app(CLI::App& app, std::vector<std::string>& args, std::ostream& out) {
    apply_config_file(app, args);
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    const std::string prog = "mcgip " + app.get_name();
    argv.push_back(prog.c_str());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    }
    return -1;
}

std::string fmtd(double v) { return io::fmt_double_exact(v); }

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct SchemeOptions {
    std::string scheme = "moment";
    double alpha = 0.5;
    std::string direction = "row";
    double w_shape = 0.2, w_length = 0.2, w_direction = 0.2, w_position = 0.2, w_duration = 0.2;

    void add_to(CLI::App& app, bool with_scheme = true) {
        if (with_scheme)
            app.add_option("--scheme", scheme, "similarity scheme")
                ->check(CLI::IsMember({"multimatch", "moment", "dhash"}))
                ->capture_default_str();
        app.add_option("--alpha", alpha, "moment scheme: weight of the mass term vs dispersion")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app.add_option("--direction", direction, "dhash scheme: differencing direction")
            ->check(CLI::IsMember({"row", "col"}))
            ->capture_default_str();
        app.add_option("--mm.w_shape", w_shape, "multimatch weight: shape")->capture_default_str();
        app.add_option("--mm.w_length", w_length, "multimatch weight: length")->capture_default_str();
        app.add_option("--mm.w_direction", w_direction, "multimatch weight: direction")
            ->capture_default_str();
        app.add_option("--mm.w_position", w_position, "multimatch weight: position")
            ->capture_default_str();
        app.add_option("--mm.w_duration", w_duration, "multimatch weight: duration")
            ->capture_default_str();
    }

    Scheme parsed_scheme() const { return scheme_from_name(scheme); }

    SchemeParams params() const {
        SchemeParams p;
        p.mm_weights = DimensionWeights::make(w_shape, w_length, w_direction, w_position, w_duration);
        p.alpha = alpha;
        p.dhash_direction = direction == "row" ? DiffDirection::Row : DiffDirection::Col;
        return p;
    }

    void echo(io::ConfigEcho& cfg) const {
        cfg.emplace_back("scheme", scheme);
        if (scheme == "moment") cfg.emplace_back("alpha", fmtd(alpha));
        if (scheme == "dhash") cfg.emplace_back("direction", direction);
        if (scheme == "multimatch") {
            cfg.emplace_back("mm.w_shape", fmtd(w_shape));
            cfg.emplace_back("mm.w_length", fmtd(w_length));
            cfg.emplace_back("mm.w_direction", fmtd(w_direction));
            cfg.emplace_back("mm.w_position", fmtd(w_position));
            cfg.emplace_back("mm.w_duration", fmtd(w_duration));
        }
    }
};

GazeItem load_item(Scheme scheme, const std::string& path) {
    if (scheme == Scheme::MultiMatch) return io::read_fixseq(path);
    return io::read_heatmap(path);
}

std::pair<std::vector<Image>, std::vector<int>> load_dataset(const std::string& dir) {
    const auto labels = io::read_labels_csv((fs::path(dir) / "labels.csv").string());
    std::vector<Image> images;
    std::vector<int> ys;
    images.reserve(labels.size());
    ys.reserve(labels.size());
    for (const auto& [id, label] : labels) {
        images.push_back(io::read_pgm((fs::path(dir) / (id + ".pgm")).string(), id));
        ys.push_back(label);
    }
    if (images.empty())
        throw DataError(dir + "/labels.csv", 0, "dataset is empty");
    for (const Image& im : images)
        if (im.width != images[0].width || im.height != images[0].height)
            throw DataError(dir, 0, "images have mixed extents");
    return {std::move(images), std::move(ys)};
}

void write_codes_csv(const std::string& path, const std::vector<GazeItem>& items,
                     DiffDirection dir, const io::ConfigEcho& cfg) {
    std::ofstream out(path);
    if (!out)
        throw DataError(path, 0, "cannot open for writing");
    for (const auto& [k, v] : cfg) out << "# cfg " << k << "=" << v << "\n";
    out << "image_id,code\n";
    for (const GazeItem& it : items)
        out << item_id(it) << "," << dhash_to_hex(dhash_encode(std::get<GazeHeatmap>(it), dir))
            << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_fixations(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Detect fixations in a raw gaze recording (dispersion-threshold clustering)",
                 "fixations"};
    std::string in_path, out_path, config;
    double dispersion = 35.0, min_dur = 100.0;
    app.add_option("--in", in_path, "input .gaze recording")->required();
    app.add_option("--dispersion", dispersion, "max cluster extent (max_x-min_x)+(max_y-min_y), px")
        ->capture_default_str();
    app.add_option("--min-dur", min_dur, "minimum fixation duration, ms")->capture_default_str();
    app.add_option("--out", out_path, "output .fix file")->required();
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const GazeRecording rec = io::read_gaze_recording(in_path);
    const FixationSequence seq = detect_fixations(rec, dispersion, min_dur);
    io::ConfigEcho cfg{{"in", in_path},
                       {"dispersion", fmtd(dispersion)},
                       {"min-dur", fmtd(min_dur)}};
    io::write_fixseq(out_path, seq, cfg);
    out << "fixations " << seq.fixations.size() << " -> " << out_path << "\n";
    return 0;
}

int cmd_heatmap(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Render a duration-weighted gaze heatmap from a fixation sequence", "heatmap"};
    std::string in_path, out_path, config;
    double sigma = 25.0, grid_scale = 1.0;
    app.add_option("--in", in_path, "input .fix file")->required();
    app.add_option("--sigma", sigma, "Gaussian kernel sigma, px")->capture_default_str();
    app.add_option("--grid-scale", grid_scale, "grid resolution relative to the image extent")
        ->capture_default_str();
    app.add_option("--out", out_path, "output .hm file")->required();
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const FixationSequence seq = io::read_fixseq(in_path);
    const GazeHeatmap hm = render_heatmap(seq, sigma, grid_scale);
    io::ConfigEcho cfg{{"in", in_path}, {"sigma", fmtd(sigma)}, {"grid-scale", fmtd(grid_scale)}};
    io::write_heatmap(out_path, hm, cfg);
    out << "heatmap " << hm.rows << "x" << hm.cols << " -> " << out_path << "\n";
    return 0;
}

int cmd_sim(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Gaze similarity of two items under one scheme", "sim"};
    SchemeOptions so;
    std::string a_path, b_path, moments_out, codes_out, config;
    so.add_to(app);
    app.add_option("--a", a_path, "first item (.fix for multimatch, .hm otherwise)")->required();
    app.add_option("--b", b_path, "second item")->required();
    app.add_option("--moments-out", moments_out, "also export both moment vectors as CSV");
    app.add_option("--codes-out", codes_out, "also export both 16-hex-digit dhash codes as CSV");
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const Scheme scheme = so.parsed_scheme();
    const GazeItem a = load_item(scheme, a_path);
    const GazeItem b = load_item(scheme, b_path);
    const double sim = scheme_similarity(a, b, scheme, so.params());
    out << io::fmt_double9(sim) << "\n";

    if (!moments_out.empty()) {
        if (scheme != Scheme::Moment)
            throw UsageError("--moments-out requires --scheme moment");
        io::ConfigEcho cfg{{"a", a_path}, {"b", b_path}};
        so.echo(cfg);
        io::write_moments_csv(moments_out,
                              {{item_id(a), moment_vector(std::get<GazeHeatmap>(a))},
                               {item_id(b), moment_vector(std::get<GazeHeatmap>(b))}},
                              cfg);
    }
    if (!codes_out.empty()) {
        if (scheme != Scheme::DHash)
            throw UsageError("--codes-out requires --scheme dhash");
        io::ConfigEcho cfg{{"a", a_path}, {"b", b_path}};
        so.echo(cfg);
        write_codes_csv(codes_out, {a, b}, so.params().dhash_direction, cfg);
    }
    return 0;
}

int cmd_affinity(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Pairwise gaze-affinity matrix over many items", "affinity"};
    SchemeOptions so;
    std::vector<std::string> inputs;
    std::string out_path, moments_out, codes_out, config;
    int jobs = 1;
    so.add_to(app);
    app.add_option("inputs", inputs, "item files (.fix for multimatch, .hm otherwise)")
        ->required()
        ->expected(-1);
    app.add_option("--jobs", jobs, "worker threads for pair evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out_path, "output affinity CSV")->required();
    app.add_option("--moments-out", moments_out, "also export all moment vectors as CSV");
    app.add_option("--codes-out", codes_out, "also export all 16-hex-digit dhash codes as CSV");
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const Scheme scheme = so.parsed_scheme();
    std::vector<GazeItem> items;
    items.reserve(inputs.size());
    for (const std::string& path : inputs) items.push_back(load_item(scheme, path));
    const AffinityMatrix A = build_affinity(items, scheme, so.params(), jobs);

    io::ConfigEcho cfg;
    so.echo(cfg);
    cfg.emplace_back("jobs", std::to_string(jobs));
    for (const std::string& path : inputs) cfg.emplace_back("input", path);
    io::write_affinity_csv(out_path, A, cfg);

    if (!moments_out.empty()) {
        if (scheme != Scheme::Moment)
            throw UsageError("--moments-out requires --scheme moment");
        std::vector<std::pair<std::string, MomentVector>> rows;
        for (const GazeItem& it : items)
            rows.emplace_back(item_id(it), moment_vector(std::get<GazeHeatmap>(it)));
        io::write_moments_csv(moments_out, rows, cfg);
    }
    if (!codes_out.empty()) {
        if (scheme != Scheme::DHash)
            throw UsageError("--codes-out requires --scheme dhash");
        write_codes_csv(codes_out, items, so.params().dhash_direction, cfg);
    }
    out << "affinity " << A.size() << "x" << A.size() << " -> " << out_path << "\n";
    return 0;
}

int cmd_pairs(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Select positive pairs from an affinity matrix", "pairs"};
    std::string affinity_path, out_path, config;
    double t = 0.7, p = 0.5;
    std::uint64_t seed = 17;
    app.add_option("--affinity", affinity_path, "input affinity CSV")->required();
    app.add_option("--t", t, "similarity threshold for candidate pairs")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--p", p, "confidence: acceptance probability per candidate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--seed", seed, "seed of the acceptance stream")->capture_default_str();
    app.add_option("--out", out_path, "output pairs CSV")->required();
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const AffinityMatrix A = io::read_affinity_csv(affinity_path);
    const PairSet ps = select_pairs(A, t, p, seed);
    io::ConfigEcho cfg{{"affinity", affinity_path},
                       {"t", fmtd(t)},
                       {"p", fmtd(p)},
                       {"seed", std::to_string(seed)}};
    io::write_pairs_csv(out_path, A, ps, cfg);
    std::size_t accepted = 0;
    for (const PairEntry& e : ps.pairs)
        if (e.accepted) ++accepted;
    out << "pairs " << accepted << " accepted of " << ps.pairs.size() << " listed -> " << out_path
        << "\n";
    return 0;
}

int cmd_synth(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Generate the two-pattern synthetic benchmark (PGM images, gaze, labels)",
                 "synth"};
    std::string out_dir, config;
    SynthParams sp;
    app.add_option("--n-per-class", sp.n_per_class, "items per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--width", sp.width, "image width, px")->capture_default_str();
    app.add_option("--height", sp.height, "image height, px")->capture_default_str();
    app.add_option("--seed", sp.seed, "generation seed")->capture_default_str();
    app.add_option("--out-dir", out_dir, "output directory")->required();
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const SynthDataset ds = synth_gaze_dataset(sp);
    fs::create_directories(out_dir);
    io::ConfigEcho cfg{{"n-per-class", std::to_string(sp.n_per_class)},
                       {"width", std::to_string(sp.width)},
                       {"height", std::to_string(sp.height)},
                       {"seed", std::to_string(sp.seed)}};
    std::vector<std::pair<std::string, int>> labels;
    for (std::size_t k = 0; k < ds.images.size(); ++k) {
        const std::string& id = ds.images[k].id;
        io::write_pgm((fs::path(out_dir) / (id + ".pgm")).string(), ds.images[k], cfg);
        io::write_fixseq((fs::path(out_dir) / (id + ".fix")).string(), ds.gaze[k], cfg);
        labels.emplace_back(id, ds.labels[k]);
    }
    io::write_labels_csv((fs::path(out_dir) / "labels.csv").string(), labels, cfg);
    out << "synth " << ds.images.size() << " items -> " << out_dir << "\n";
    return 0;
}

int cmd_train(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Contrastive pre-training of the toy encoder", "train"};
    std::string data_dir, pairs_path, affinity_path, model_out, trace_out, config;
    std::string cst = "infonce", weight_mode = "binary", pair_direction = "both";
    std::string nce_negatives = "all";
    TrainConfig tc;
    int hidden = 32, embed_dim = 16;
    app.add_option("--data", data_dir, "dataset directory (labels.csv + <id>.pgm)")->required();
    auto* opt_pairs = app.add_option("--pairs", pairs_path, "fixed pair set CSV (from 'pairs')");
    auto* opt_aff =
        app.add_option("--affinity", affinity_path, "affinity CSV; pairs redrawn per epoch");
    opt_pairs->excludes(opt_aff);
    app.add_option("--t", tc.threshold_t, "similarity threshold (with --affinity)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--p", tc.confidence_p, "confidence (with --affinity)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--cst", cst, "constraint function")
        ->check(CLI::IsMember({"infonce", "l2"}))
        ->capture_default_str();
    app.add_option("--tau", tc.loss.tau, "InfoNCE temperature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--weight-mode", weight_mode, "pair weights: indicator or affinity value")
        ->check(CLI::IsMember({"binary", "affinity"}))
        ->capture_default_str();
    app.add_option("--pair-direction", pair_direction, "off-diagonal terms: both orders or single")
        ->check(CLI::IsMember({"both", "single"}))
        ->capture_default_str();
    app.add_option("--nce-negatives", nce_negatives, "InfoNCE denominator: every view, or positives dropped")
        ->check(CLI::IsMember({"all", "non-positives"}))
        ->capture_default_str();
    app.add_option("--epochs", tc.epochs, "training epochs")->capture_default_str();
    app.add_option("--lr", tc.lr, "SGD learning rate")->capture_default_str();
    app.add_option("--batch-size", tc.batch_size, "batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--hidden", hidden, "encoder hidden width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--embed-dim", embed_dim, "embedding dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", tc.seed, "training seed (init, shuffling, gating, views)")
        ->capture_default_str();
    app.add_option("--flip-prob", tc.aug.flip_prob, "augmentation: horizontal flip probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--crop-min", tc.aug.crop_min, "augmentation: min crop fraction")
        ->check(CLI::Range(0.05, 1.0))
        ->capture_default_str();
    app.add_option("--crop-max", tc.aug.crop_max, "augmentation: max crop fraction")
        ->check(CLI::Range(0.05, 1.0))
        ->capture_default_str();
    app.add_option("--noise-sigma", tc.aug.noise_sigma, "augmentation: additive noise sigma")
        ->capture_default_str();
    app.add_option("--aug-seed", tc.aug.seed, "augmentation seed")->capture_default_str();
    app.add_option("--out", model_out, "output model file")->required();
    app.add_option("--trace", trace_out, "output per-epoch trace CSV")->required();
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    if (pairs_path.empty() == affinity_path.empty())
        throw UsageError("train: give exactly one of --pairs or --affinity");
    tc.loss.cst = cst == "infonce" ? CstKind::InfoNce : CstKind::L2;
    tc.loss.weight_mode = weight_mode == "binary" ? WeightMode::Binary : WeightMode::Affinity;
    tc.loss.direction = pair_direction == "both" ? PairDirection::Both : PairDirection::Single;
    tc.loss.exclude_positive_partners = nce_negatives == "non-positives";

    auto [images, labels] = load_dataset(data_dir);
    (void)labels;
    const int input_dim = images[0].width * images[0].height;
    ToyEncoder enc = ToyEncoder::init(input_dim, hidden, embed_dim, tc.seed);

    TrainResult result;
    if (!affinity_path.empty()) {
        const AffinityMatrix A = io::read_affinity_csv(affinity_path);
        result = train(images, A, std::move(enc), tc);
    } else {
        const auto records = io::read_pairs_csv(pairs_path);
        std::map<std::string, std::size_t> index;
        for (std::size_t k = 0; k < images.size(); ++k) index[images[k].id] = k;
        PairSet ps;
        ps.threshold_t = tc.threshold_t;
        ps.confidence_p = tc.confidence_p;
        for (const io::PairRecord& rec : records) {
            const auto it_i = index.find(rec.id_i);
            const auto it_j = index.find(rec.id_j);
            if (it_i == index.end() || it_j == index.end())
                throw DataError(pairs_path, 0, "pair references id missing from the dataset: " +
                                                   rec.id_i + "," + rec.id_j);
            ps.pairs.push_back({std::min(it_i->second, it_j->second),
                                std::max(it_i->second, it_j->second), rec.affinity, rec.accepted});
        }
        result = train_static(images, ps, std::move(enc), tc);
    }

    io::write_model(model_out, result.encoder);
    io::ConfigEcho cfg{{"data", data_dir}};
    if (!pairs_path.empty()) cfg.emplace_back("pairs", pairs_path);
    if (!affinity_path.empty()) {
        cfg.emplace_back("affinity", affinity_path);
        cfg.emplace_back("t", fmtd(tc.threshold_t));
        cfg.emplace_back("p", fmtd(tc.confidence_p));
    }
    cfg.emplace_back("cst", cst);
    cfg.emplace_back("tau", fmtd(tc.loss.tau));
    cfg.emplace_back("weight-mode", weight_mode);
    cfg.emplace_back("pair-direction", pair_direction);
    cfg.emplace_back("nce-negatives", nce_negatives);
    cfg.emplace_back("epochs", std::to_string(tc.epochs));
    cfg.emplace_back("lr", fmtd(tc.lr));
    cfg.emplace_back("batch-size", std::to_string(tc.batch_size));
    cfg.emplace_back("hidden", std::to_string(hidden));
    cfg.emplace_back("embed-dim", std::to_string(embed_dim));
    cfg.emplace_back("seed", std::to_string(tc.seed));
    cfg.emplace_back("flip-prob", fmtd(tc.aug.flip_prob));
    cfg.emplace_back("crop-min", fmtd(tc.aug.crop_min));
    cfg.emplace_back("crop-max", fmtd(tc.aug.crop_max));
    cfg.emplace_back("noise-sigma", fmtd(tc.aug.noise_sigma));
    cfg.emplace_back("aug-seed", std::to_string(tc.aug.seed));
    io::write_trace_csv(trace_out, result.trace, cfg);

    const double final_loss = result.trace.empty() ? 0.0 : result.trace.back().loss;
    out << "train " << tc.epochs << " epochs, final loss " << io::fmt_double9(final_loss) << " -> "
        << model_out << "\n";
    return 0;
}

int cmd_probe(std::vector<std::string> args, std::ostream& out) {
    CLI::App app{"Linear-probe accuracy of a trained encoder on a labeled dataset", "probe"};
    std::string model_path, data_dir, embeddings_out, config;
    std::uint64_t seed = 17;
    app.add_option("--model", model_path, "trained model file")->required();
    app.add_option("--data", data_dir, "dataset directory (labels.csv + <id>.pgm)")->required();
    app.add_option("--seed", seed, "split and probe seed")->capture_default_str();
    app.add_option("--embeddings", embeddings_out, "optional embedding CSV export");
    app.add_option("--config", config, "INI config file (key = value); flags override");
    if (int rc = parse_app(app, args, out); rc >= 0) return rc;

    const ToyEncoder enc = io::read_model(model_path);
    auto [images, labels] = load_dataset(data_dir);
    if (images[0].width * images[0].height != enc.input_dim)
        throw DataError(data_dir, 0, "image extent does not match the model input dimension");
    const std::vector<Embedding> embeddings = encode_all(images, enc);

    if (!embeddings_out.empty()) {
        std::ofstream ef(embeddings_out);
        if (!ef)
            throw DataError(embeddings_out, 0, "cannot open for writing");
        ef << "# cfg model=" << model_path << "\n# cfg data=" << data_dir << "\n# cfg seed=" << seed
           << "\n";
        ef << "image_id";
        for (int k = 0; k < enc.output_dim; ++k) ef << ",e" << k;
        ef << "\n";
        for (std::size_t k = 0; k < embeddings.size(); ++k) {
            ef << images[k].id;
            for (double v : embeddings[k].values) ef << "," << io::fmt_double9(v);
            ef << "\n";
        }
    }

    const double acc = linear_probe(embeddings, labels, seed);
    out << "accuracy " << io::fmt_double9(acc) << "\n";
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << kTopHelp;
        return 1;
    }
    const std::string& sub = args[0];
    std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (sub == "--help" || sub == "-h" || sub == "help") {
            out << kTopHelp;
            return 0;
        }
        if (sub == "fixations") return cmd_fixations(std::move(rest), out);
        if (sub == "heatmap") return cmd_heatmap(std::move(rest), out);
        if (sub == "sim") return cmd_sim(std::move(rest), out);
        if (sub == "affinity") return cmd_affinity(std::move(rest), out);
        if (sub == "pairs") return cmd_pairs(std::move(rest), out);
        if (sub == "synth") return cmd_synth(std::move(rest), out);
        if (sub == "train") return cmd_train(std::move(rest), out);
        if (sub == "probe") return cmd_probe(std::move(rest), out);
        err << "mcgip: unknown command '" << sub << "'\n\n" << kTopHelp;
        return 1;
    } catch (const CLI::ParseError& e) {
        err << "mcgip " << sub << ": " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        err << "mcgip: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "mcgip: data error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "mcgip: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "mcgip: " << e.what() << "\n";
        return 2;
    }
}

} // namespace mcgip::cli
