#include <texturekit/cli.hpp>

#include <texturekit/cdm.hpp>
#include <texturekit/ctiem.hpp>
#include <texturekit/error.hpp>
#include <texturekit/image_io.hpp>
#include <texturekit/losses.hpp>
#include <texturekit/sampler.hpp>
#include <texturekit/selftest.hpp>
#include <texturekit/tensor_io.hpp>
#include <texturekit/tiem.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <regex>

namespace texturekit::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct InvariantFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw InvariantFailure(what);
}

// Every flag doubles as a config-file key (its long name without dashes).
// File values fill in whatever the command line left unset.
class Bindings {
public:
    template <typename T>
    CLI::Option* add(CLI::App* app, const std::string& flag, T& var, const std::string& help) {
        CLI::Option* opt = app->add_option(flag, var, help)->capture_default_str();
        std::string key = flag.substr(flag.find_first_not_of('-'));
        bindings_.push_back({opt, std::move(key), [&var](const json& j) { var = j.get<T>(); }});
        return opt;
    }

    CLI::Option* flag(CLI::App* app, const std::string& flag, bool& var, const std::string& help) {
        CLI::Option* opt = app->add_flag(flag, var, help);
        std::string key = flag.substr(flag.find_first_not_of('-'));
        bindings_.push_back({opt, std::move(key), [&var](const json& j) { var = j.get<bool>(); }});
        return opt;
    }

    /// Looks each unset key up in `section` first, then in `root`.
    void apply(const json& root, const json* section) const {
        for (const auto& b : bindings_) {
            if (b.option->count() > 0) continue;
            if (section && section->contains(b.key)) {
                b.set(section->at(b.key));
            } else if (root.contains(b.key)) {
                b.set(root.at(b.key));
            }
        }
    }

private:
    struct Binding {
        CLI::Option* option;
        std::string key;
        std::function<void(const json&)> set;
    };
    std::vector<Binding> bindings_;
};

std::string crc_hex(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, bytes.data(), uInt(bytes.size()));
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

// Writes <stage>_<name> artifacts, re-reads each one and records it in
// manifest.json with its shape and CRC-32.
class ArtifactWriter {
public:
    ArtifactWriter(std::string stage, fs::path dir) : stage_(std::move(stage)), dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::WriteFailed, "cannot create " + dir_.string() + ": " + ec.message());
    }

    void tensor(const std::string& name, const FeatureMap& m) {
        const std::string file = stage_ + "_" + name + ".txk";
        const auto bytes = encode_tensor(m);
        write_file_bytes(dir_ / file, bytes);
        const auto back = read_file_bytes(dir_ / file);
        require(back == bytes, file + " did not read back identically");
        std::size_t offset = 0;
        require(decode_tensor(back, offset).all_finite(), file + " holds non-finite values");
        const Shape s = m.shape();
        record(file, json::array({s.channels, s.height, s.width}), bytes);
    }

    /// Histogram tensor whose float values must sum to 1 within 1e-9.
    void histogram(const std::string& name, std::span<const double> hist, Shape shape) {
        const FeatureMap m(shape, mass_preserving_floats(hist));
        tensor(name, m);
        const FeatureMap back = read_tensor(dir_ / (stage_ + "_" + name + ".txk"));
        double total = 0.0;
        bool nonnegative = true;
        for (float v : back.data()) {
            total += v;
            nonnegative = nonnegative && v >= 0.0f;
        }
        require(std::abs(total - 1.0) <= 1e-9 && nonnegative,
                stage_ + "_" + name + " is not a normalized histogram");
    }

    void json_file(const std::string& name, const json& j) {
        const std::string file = stage_ + "_" + name + ".json";
        const std::string text = j.dump(2) + "\n";
        const std::vector<std::uint8_t> bytes(text.begin(), text.end());
        write_file_bytes(dir_ / file, bytes);
        record(file, nullptr, bytes);
    }

    /// Writes manifest.json; `parameters` echoes the effective settings.
    void finish(const json& parameters) {
        json artifacts = json::array();
        for (const auto& [file, entry] : entries_) artifacts.push_back(entry);
        const json manifest{{"stage", stage_}, {"parameters", parameters}, {"artifacts", artifacts}};
        const std::string text = manifest.dump(2) + "\n";
        write_file_bytes(dir_ / "manifest.json",
                         std::vector<std::uint8_t>(text.begin(), text.end()));
    }

    std::size_t count() const noexcept { return entries_.size(); }
    const fs::path& dir() const noexcept { return dir_; }

private:
    void record(const std::string& file, json shape, std::span<const std::uint8_t> bytes) {
        entries_[file] = json{{"file", file},
                              {"shape", std::move(shape)},
                              {"bytes", bytes.size()},
                              {"crc32", crc_hex(bytes)}};
    }

    std::string stage_;
    fs::path dir_;
    std::map<std::string, json> entries_;  // sorted by file name
};

FeatureMap load_input(const std::string& path) {
    if (fs::path(path).extension() == ".txk") return read_tensor(path);
    return load_image(path);
}

WeightSet resolve_weights(const std::string& path, std::size_t channels, std::size_t n_steps) {
    return path.empty() ? default_weights(channels, n_steps) : load_weights(path);
}

CdmConfig cdm_config(const std::vector<unsigned>& levels, double transition) {
    CdmConfig cfg;
    cfg.dfb_levels = levels;
    cfg.transition_width = transition;
    return cfg;
}

std::size_t pad_multiple(const CdmConfig& cfg) {
    std::size_t m = 1;
    for (std::size_t i = 0; i < cfg.num_levels(); ++i) m *= cfg.lp.factor;
    return m;
}

struct Globals {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool verbose = false;
};

struct ContourletArgs {
    std::string input;
    std::vector<unsigned> levels{4, 3};
    double transition = 0.1;
};

struct TiemArgs {
    std::string input;
    std::size_t n = 128;
    double theta = 0.9;
    std::vector<std::size_t> region;
    std::string weights;
    std::string save_weights;
};

struct CtiemArgs {
    std::string input;
    std::size_t n = 8;
    double theta = 0.9;
    std::vector<std::size_t> steps{1, 3, 5};
    std::string weights;
    std::string save_weights;
};

struct SampleArgs {
    std::string input;
    std::size_t m = 16;
    double k = 2.0;
    double beta = 0.7;
};

struct DistillArgs {
    std::string teacher_dir;
    std::string student_dir;
    double lambda1 = 0.9;
    double lambda2 = 3.0;
    double lambda3 = 0.01;
    double seg = 0.0;
    double adv = 0.0;
};

struct ReconstructArgs {
    std::string input;
    std::vector<unsigned> levels{4, 3};
    double transition = 0.1;
};

int cmd_contourlet(const ContourletArgs& a, const Globals& g, std::ostream& out) {
    const CdmConfig cfg = cdm_config(a.levels, a.transition);
    const FeatureMap x = reflect_pad(load_input(a.input), pad_multiple(cfg));
    const StructuralFeature f = cdm_forward(x, cfg);

    ArtifactWriter w("contourlet", g.out.empty() ? "." : g.out);
    for (std::size_t n = 0; n < f.levels.size(); ++n) {
        for (std::size_t k = 0; k < f.levels[n].size(); ++k) {
            w.tensor("L" + std::to_string(n + 1) + "_b" + std::to_string(k), f.levels[n][k]);
        }
    }
    w.finish({{"input", a.input}, {"levels", a.levels}, {"transition", a.transition}});
    out << "contourlet: " << f.subband_count() << " subbands over " << f.levels.size()
        << " levels from " << x.height() << "x" << x.width() << " -> " << w.dir().string() << "\n";
    return kExitOk;
}

int cmd_tiem(const TiemArgs& a, const Globals& g, std::ostream& out) {
    FeatureMap x = load_input(a.input);
    if (!a.region.empty()) {
        if (a.region.size() != 4) {
            throw Error(ErrorCode::InvalidArgument, "--region takes top,left,height,width");
        }
        x = crop(x, a.region[0], a.region[1], a.region[2], a.region[3]);
    }
    const WeightSet weights = resolve_weights(a.weights, x.channels(), 3);
    const TiemResult r = tiem_forward(x, TiemConfig{a.n, a.theta}, weights);
    const std::size_t n = a.n;

    for (std::size_t i = 0; i < n; ++i) {
        require(r.stat.adjacency.col(Eigen::Index(i)).sum() > 1.0 - 1e-6 &&
                    r.stat.adjacency.col(Eigen::Index(i)).sum() < 1.0 + 1e-6,
                "adjacency column does not sum to 1");
    }

    ArtifactWriter w("tiem", g.out.empty() ? "." : g.out);
    w.histogram("C", r.counting.counts, Shape{1, 1, n});
    w.histogram("Ctilde", r.counting.denoised, Shape{1, 1, n});
    w.tensor("D", from_matrix(r.stat.features));
    w.tensor("X", from_matrix(r.stat.adjacency));
    w.tensor("Lprime", from_matrix(r.stat.levels));
    w.tensor("R", r.stat.reconstructed);
    if (!a.save_weights.empty()) save_weights(weights, a.save_weights);
    w.finish({{"input", a.input},
              {"n", a.n},
              {"theta", a.theta},
              {"region", a.region},
              {"weights", a.weights.empty() ? json("default") : json(a.weights)}});
    out << "tiem: N=" << n << " theta=" << a.theta << " on " << x.height() << "x" << x.width()
        << ", " << w.count() << " tensors -> " << w.dir().string() << "\n";
    return kExitOk;
}

int cmd_ctiem(const CtiemArgs& a, const Globals& g, std::ostream& out) {
    const FeatureMap x = load_input(a.input);
    const WeightSet weights = resolve_weights(a.weights, x.channels(), a.steps.size());
    const CtiemResult r = ctiem_forward(x, CtiemConfig{a.n, a.theta, a.steps}, weights);

    ArtifactWriter w("ctiem", g.out.empty() ? "." : g.out);
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        const std::string tag = "_s" + std::to_string(a.steps[s]);
        w.histogram("C" + tag, r.counts[s], Shape{1, a.n, a.n});
        w.histogram("Ctilde" + tag, r.denoised[s], Shape{1, a.n, a.n});
    }
    w.tensor("T", FeatureMap(Shape{r.texture.t.size(), 1, 1},
                             std::vector<float>(r.texture.t.begin(), r.texture.t.end())));
    if (!a.save_weights.empty()) save_weights(weights, a.save_weights);
    w.finish({{"input", a.input},
              {"n", a.n},
              {"theta", a.theta},
              {"steps", a.steps},
              {"weights", a.weights.empty() ? json("default") : json(a.weights)}});
    out << "ctiem: N=" << a.n << " over " << a.steps.size() << " steps, T has "
        << r.texture.t.size() << " channels -> " << w.dir().string() << "\n";
    return kExitOk;
}

int cmd_sample(const SampleArgs& a, const Globals& g, std::ostream& out) {
    const FeatureMap x = load_input(a.input);
    SamplerConfig cfg;
    cfg.m_samples = a.m;
    cfg.overgen_factor = a.k;
    cfg.importance_fraction = a.beta;
    cfg.seed = g.seed;
    const auto samples = sample_regions(x, cfg);

    json list = json::array();
    for (const auto& s : samples) {
        list.push_back({{"center", {s.row, s.col}},
                        {"rect", {s.rect.top, s.rect.left, s.rect.height, s.rect.width}},
                        {"score", s.score},
                        {"origin", to_string(s.origin)}});
    }
    out << list.dump(2) << "\n";
    if (!g.out.empty()) {
        ArtifactWriter w("sample", g.out);
        w.json_file("regions", list);
        w.finish({{"input", a.input}, {"m", a.m}, {"k", a.k}, {"beta", a.beta}, {"seed", g.seed}});
    }
    return kExitOk;
}

// contourlet_L{n}_b{k}.txk files of a directory, grouped by level.
std::optional<StructuralFeature> load_structural(const fs::path& dir, const StructuralFeature* like) {
    static const std::regex pattern(R"(contourlet_L(\d+)_b(\d+)\.txk)");
    std::map<std::size_t, std::map<std::size_t, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::smatch m;
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, m, pattern)) {
            files[std::stoul(m[1])][std::stoul(m[2])] = entry.path();
        }
    }
    if (files.empty()) return std::nullopt;
    StructuralFeature f;
    for (const auto& [level, bands] : files) {
        auto& stack = f.levels.emplace_back();
        for (const auto& [k, path] : bands) {
            FeatureMap band = read_tensor(path);
            const std::size_t n = f.levels.size() - 1;
            if (like && n < like->levels.size() && k < like->levels[n].size()) {
                const Shape target = like->levels[n][k].shape();
                if (band.channels() != target.channels) {
                    throw Error(ErrorCode::ShapeMismatch, "student subband channels differ from teacher");
                }
                band = resize_bilinear(band, target.height, target.width);
            }
            stack.push_back(std::move(band));
        }
    }
    return f;
}

std::optional<std::pair<StatFeature, Shape>> load_stat(const fs::path& dir) {
    const fs::path d = dir / "tiem_D.txk", l = dir / "tiem_Lprime.txk", r = dir / "tiem_R.txk";
    if (!fs::exists(d) || !fs::exists(l) || !fs::exists(r)) return std::nullopt;
    StatFeature s;
    s.features = to_matrix(read_tensor(d));
    s.levels = to_matrix(read_tensor(l));
    s.reconstructed = read_tensor(r);
    const Shape shape = s.reconstructed.shape();
    return std::make_pair(std::move(s), shape);
}

int cmd_distill(const DistillArgs& a, const Globals& g, std::ostream& out) {
    for (const auto& dir : {a.teacher_dir, a.student_dir}) {
        if (!fs::is_directory(dir)) throw Error(ErrorCode::UnreadableFile, dir + " is not a directory");
    }
    json terms{{"l_seg", a.seg}, {"l_adv", a.adv}};
    double l_str = 0.0, l_sta = 0.0, l_re = 0.0;

    const auto t_str = load_structural(a.teacher_dir, nullptr);
    if (t_str) {
        const auto s_str = load_structural(a.student_dir, &*t_str);
        if (!s_str) throw Error(ErrorCode::UnreadableFile, "student directory has no contourlet subbands");
        l_str = structural_loss(*t_str, *s_str);
        terms["l_str"] = l_str;
    } else {
        terms["l_str"] = nullptr;
    }

    const auto t_sta = load_stat(a.teacher_dir);
    if (t_sta) {
        const auto s_sta = load_stat(a.student_dir);
        if (!s_sta) throw Error(ErrorCode::UnreadableFile, "student directory has no tiem tensors");
        const Shape region = t_sta->second;
        const QclTerms q = qcl_loss(t_sta->first, s_sta->first, region.height, region.width);
        l_sta = q.l_qdl;
        terms["l_d"] = q.l_d;
        terms["corr_student_sum"] = q.corr_student_sum;
        terms["corr_teacher_sum"] = q.corr_teacher_sum;
        terms["l_sta"] = l_sta;
    } else {
        terms["l_sta"] = nullptr;
    }

    const fs::path t_probs = fs::path(a.teacher_dir) / "response_probs.txk";
    const fs::path s_probs = fs::path(a.student_dir) / "response_probs.txk";
    if (fs::exists(t_probs)) {
        l_re = response_kl_loss(read_tensor(t_probs), read_tensor(s_probs));
        terms["l_re"] = l_re;
    } else {
        terms["l_re"] = nullptr;
    }

    const LossWeights lw{a.lambda1, a.lambda2, a.lambda3};
    terms["lambda1"] = lw.lambda1;
    terms["lambda2"] = lw.lambda2;
    terms["lambda3"] = lw.lambda3;
    terms["total"] = total_loss(a.seg, l_str, l_sta, l_re, a.adv, lw);
    require(std::isfinite(terms["total"].get<double>()), "total loss is not finite");

    out << terms.dump() << "\n";
    if (!g.out.empty()) {
        ArtifactWriter w("distill-loss", g.out);
        w.json_file("terms", terms);
        w.finish({{"teacher-dir", a.teacher_dir}, {"student-dir", a.student_dir}});
    }
    return kExitOk;
}

int cmd_reconstruct(const ReconstructArgs& a, const Globals& g, std::ostream& out) {
    const CdmConfig cfg = cdm_config(a.levels, a.transition);
    const FeatureMap x = reflect_pad(load_input(a.input), pad_multiple(cfg));
    cfg.validate(x.height(), x.width());

    // High bands stay at full resolution on this path.
    std::vector<FeatureMap> highs;
    FeatureMap low = x;
    for (unsigned m : cfg.dfb_levels) {
        LpLevel stage = lp_analyze(low, cfg.lp);
        highs.push_back(dfb_reconstruct(dfb_decompose(stage.high, DfbConfig{m, cfg.transition_width})));
        low = std::move(stage.low);
    }
    for (std::size_t i = highs.size(); i-- > 0;) low = lp_synthesize(low, highs[i], cfg.lp);
    const double err = max_abs_diff(low, x);

    const json report{{"input", a.input}, {"levels", a.levels}, {"max_error", err}};
    out << "reconstruct: max abs error " << err << " over " << x.channels() << "x" << x.height()
        << "x" << x.width() << "\n";
    if (!g.out.empty()) {
        ArtifactWriter w("reconstruct", g.out);
        w.json_file("report", report);
        w.finish({{"input", a.input}, {"levels", a.levels}, {"transition", a.transition}});
    }
    require(err < 1e-5, "reconstruction error exceeds 1e-5");
    return kExitOk;
}

int cmd_selftest(const Globals& g, std::ostream& out) {
    const auto results = run_selftest();
    json list = json::array();
    bool all = true;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        list.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    if (!g.out.empty()) {
        ArtifactWriter w("selftest", g.out);
        w.json_file("report", list);
        w.finish(json::object());
    }
    out << "selftest: " << std::count_if(results.begin(), results.end(),
                                         [](const CheckResult& r) { return r.passed; })
        << "/" << results.size() << " checks passed\n";
    return all ? kExitOk : kExitInvariant;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Texture analysis toolkit", "texturekit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    Bindings global;
    app.add_option("--config", g.config, "JSON file with defaults for any flag");
    global.add(&app, "--out", g.out, "Output directory");
    global.add(&app, "--seed", g.seed, "Seed for stochastic stages");
    global.flag(&app, "-v,--verbose", g.verbose, "Echo effective settings to stderr");

    std::map<std::string, Bindings> per;

    ContourletArgs ca;
    auto* contourlet = app.add_subcommand("contourlet", "Contourlet subbands of an image");
    contourlet->add_option("input", ca.input, "PGM/PNG image or .txk tensor")->required();
    per["contourlet"].add(contourlet, "--levels", ca.levels, "Directional levels per stage")->delimiter(',');
    per["contourlet"].add(contourlet, "--transition", ca.transition, "Wedge transition width (fraction of pi)");

    TiemArgs ta;
    auto* tiem = app.add_subcommand("tiem", "Intensity equalization statistics of a region");
    tiem->add_option("input", ta.input, "PGM/PNG image or .txk tensor")->required();
    per["tiem"].add(tiem, "--n", ta.n, "Quantization levels");
    per["tiem"].add(tiem, "--theta", ta.theta, "Denoising threshold");
    per["tiem"].add(tiem, "--region", ta.region, "top,left,height,width (default: whole map)")->delimiter(',');
    per["tiem"].add(tiem, "--weights", ta.weights, "TXKW weight file (default: built-in)");
    per["tiem"].add(tiem, "--save-weights", ta.save_weights, "Write the weights used to this file");

    CtiemArgs cta;
    auto* ctiem = app.add_subcommand("ctiem", "Co-occurrence statistics of a whole map");
    ctiem->add_option("input", cta.input, "PGM/PNG image or .txk tensor")->required();
    per["ctiem"].add(ctiem, "--n", cta.n, "Quantization levels");
    per["ctiem"].add(ctiem, "--theta", cta.theta, "Denoising threshold");
    per["ctiem"].add(ctiem, "--steps", cta.steps, "Horizontal dilation steps")->delimiter(',');
    per["ctiem"].add(ctiem, "--weights", cta.weights, "TXKW weight file (default: built-in)");
    per["ctiem"].add(ctiem, "--save-weights", cta.save_weights, "Write the weights used to this file");

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Importance-sampled regions as JSON");
    sample->add_option("input", sa.input, "PGM/PNG image or .txk tensor")->required();
    per["sample"].add(sample, "--m", sa.m, "Number of regions");
    per["sample"].add(sample, "--k", sa.k, "Over-generation factor");
    per["sample"].add(sample, "--beta", sa.beta, "Importance fraction");

    DistillArgs da;
    auto* distill = app.add_subcommand("distill-loss", "Loss terms between teacher and student outputs");
    per["distill-loss"].add(distill, "--teacher-dir", da.teacher_dir, "Teacher output directory");
    per["distill-loss"].add(distill, "--student-dir", da.student_dir, "Student output directory");
    per["distill-loss"].add(distill, "--lambda1", da.lambda1, "Weight of structural + statistical terms");
    per["distill-loss"].add(distill, "--lambda2", da.lambda2, "Weight of the response term");
    per["distill-loss"].add(distill, "--lambda3", da.lambda3, "Weight of the adversarial term");
    per["distill-loss"].add(distill, "--seg", da.seg, "Externally computed segmentation loss");
    per["distill-loss"].add(distill, "--adv", da.adv, "Externally computed adversarial loss");

    ReconstructArgs ra;
    auto* reconstruct = app.add_subcommand("reconstruct", "LP + DFB round trip error of an image");
    reconstruct->add_option("input", ra.input, "PGM/PNG image or .txk tensor")->required();
    per["reconstruct"].add(reconstruct, "--levels", ra.levels, "Directional levels per stage")->delimiter(',');
    per["reconstruct"].add(reconstruct, "--transition", ra.transition, "Wedge transition width");

    auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (!g.config.empty()) {
            const auto bytes = read_file_bytes(g.config);
            json cfg;
            try {
                cfg = json::parse(bytes.begin(), bytes.end());
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::UnsupportedFormat, g.config + ": " + e.what());
            }
            if (!cfg.is_object()) throw Error(ErrorCode::UnsupportedFormat, g.config + ": not a JSON object");
            global.apply(cfg, nullptr);
            const json* section = cfg.contains(name) && cfg[name].is_object() ? &cfg[name] : nullptr;
            per[name].apply(cfg, section);
        }
        if (name == "distill-loss" && (da.teacher_dir.empty() || da.student_dir.empty())) {
            err << "distill-loss: --teacher-dir and --student-dir are required\n";
            return kExitUsage;
        }
        if (g.verbose) err << "texturekit " << name << " out=" << (g.out.empty() ? "-" : g.out) << " seed=" << g.seed << "\n";

        if (chosen == contourlet) return cmd_contourlet(ca, g, out);
        if (chosen == tiem) return cmd_tiem(ta, g, out);
        if (chosen == ctiem) return cmd_ctiem(cta, g, out);
        if (chosen == sample) return cmd_sample(sa, g, out);
        if (chosen == distill) return cmd_distill(da, g, out);
        if (chosen == reconstruct) return cmd_reconstruct(ra, g, out);
        if (chosen == selftest) return cmd_selftest(g, out);
        return kExitUsage;
    } catch (const InvariantFailure& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_io() ? kExitIo : kExitUsage;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace texturekit::cli
