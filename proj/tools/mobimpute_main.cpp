// mobimpute command line tool: GPS ingestion, flight/pause segmentation,
// hot-deck imputation of missing intervals, daily mobility features with
// resampling confidence intervals, scheduled-missingness evaluation, and the
// analytic gap experiments. All outputs are a pure function of
// (inputs, config, seed).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "mobimpute/analytic.hpp"
#include "mobimpute/evaluation.hpp"
#include "mobimpute/features.hpp"
#include "mobimpute/imputer.hpp"
#include "mobimpute/io.hpp"
#include "mobimpute/segmentation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mobimpute;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::vector<std::string> inputs;
    std::string format = "csv";  // csv | plt
    std::string kernel = "TL";
    double nu = 1.0;
    double scale_multiplier = 1.0;
    SegmentationConfig seg;
    FeatureConfig feat;
    OnOffSchedule schedule;
    int replicates = 100;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::vector<std::string> methods = {"LI", "TL.1", "TL.10", "TL.20",
                                        "GL.1", "GL.10", "GL.20",
                                        "GLC.1", "GLC.10", "GLC.20"};
    // analytic grid
    std::vector<int> analytic_n = {50, 200, 800};
    std::vector<double> analytic_theta0 = {0.0, kPi / 4.0, kPi / 2.0};
    int analytic_reps = 1000;
    std::vector<double> jitter_fractions = {0.8, 0.6, 0.4, 0.2, 0.0};
    double jitter_scale = 1.0;
};

KernelFamily parse_family(const std::string& name) {
    if (name == "TL") return KernelFamily::TL;
    if (name == "GL") return KernelFamily::GL;
    if (name == "GLC") return KernelFamily::GLC;
    if (name == "LI") return KernelFamily::LI;
    throw CLI::ValidationError("kernel must be TL, GL, GLC or LI");
}

// "TL.20" -> TL kernel with scale multiplier 20; bare "LI" etc. also valid.
Method parse_method(const std::string& name, double nu) {
    Method m;
    m.name = name;
    const auto dot = name.find('.');
    const std::string fam = name.substr(0, dot);
    double mult = 1.0;
    if (dot != std::string::npos) mult = std::stod(name.substr(dot + 1));
    m.spec = KernelSpec::make(parse_family(fam), nu, mult);
    return m;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot read config file: " + path);
    json j;
    in >> j;
    if (j.contains("input")) {
        if (j["input"].is_array()) cfg.inputs = j["input"].get<std::vector<std::string>>();
        else cfg.inputs = {j["input"].get<std::string>()};
    }
    cfg.format = j.value("format", cfg.format);
    cfg.kernel = j.value("kernel", cfg.kernel);
    cfg.nu = j.value("nu", cfg.nu);
    cfg.scale_multiplier = j.value("scale_multiplier", cfg.scale_multiplier);
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (j.contains("methods")) cfg.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("segmentation")) {
        const auto& s = j["segmentation"];
        cfg.seg.pause_radius_m = s.value("pause_radius_m", cfg.seg.pause_radius_m);
        cfg.seg.min_pause_s = s.value("min_pause_s", cfg.seg.min_pause_s);
        cfg.seg.gap_threshold_s = s.value("gap_threshold_s", cfg.seg.gap_threshold_s);
        cfg.seg.pause_merge_m = s.value("pause_merge_m", cfg.seg.pause_merge_m);
    }
    if (j.contains("features")) {
        const auto& f = j["features"];
        cfg.feat.home_radius_m = f.value("home_radius_m", cfg.feat.home_radius_m);
        cfg.feat.sigloc_radius_m = f.value("sigloc_radius_m", cfg.feat.sigloc_radius_m);
        cfg.feat.sigloc_min_s = f.value("sigloc_min_s", cfg.feat.sigloc_min_s);
        cfg.feat.tz_offset_s = f.value("tz_offset_s", cfg.feat.tz_offset_s);
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        cfg.schedule.on_s = s.value("on_min", cfg.schedule.on_s / 60.0) * 60.0;
        cfg.schedule.off_s = s.value("off_min", cfg.schedule.off_s / 60.0) * 60.0;
        cfg.schedule.phase_s = s.value("phase_s", cfg.schedule.phase_s);
    }
    if (j.contains("analytic")) {
        const auto& a = j["analytic"];
        if (a.contains("n")) cfg.analytic_n = a["n"].get<std::vector<int>>();
        if (a.contains("theta0")) cfg.analytic_theta0 = a["theta0"].get<std::vector<double>>();
        cfg.analytic_reps = a.value("reps", cfg.analytic_reps);
        if (a.contains("missing_fractions"))
            cfg.jitter_fractions = a["missing_fractions"].get<std::vector<double>>();
        cfg.jitter_scale = a.value("jitter_scale", cfg.jitter_scale);
    }
}

void parse_schedule_flag(RunConfig& cfg, const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) throw CLI::ValidationError("--schedule expects ON/OFF minutes, e.g. 2/10");
    cfg.schedule.on_s = std::stod(s.substr(0, slash)) * 60.0;
    cfg.schedule.off_s = std::stod(s.substr(slash + 1)) * 60.0;
}

std::string subject_name(const std::string& path) {
    std::string stem = fs::path(path).stem().string();
    for (char& c : stem) {
        if (c == '/' || c == '\\' || c == ' ') c = '_';
    }
    return stem;
}

// Load inputs as (subject, records) pairs, sorted for determinism.
std::vector<std::pair<std::string, std::vector<GpsRecord>>> load_inputs(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::vector<GpsRecord>>> out;
    for (const auto& input : cfg.inputs) {
        if (cfg.format == "plt") {
            if (fs::is_directory(input)) {
                auto tree = io::read_plt_tree(input);
                for (auto& [name, recs] : tree) out.emplace_back(subject_name(name), std::move(recs));
            } else {
                std::ifstream in(input, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                out.emplace_back(subject_name(input), parse_plt(ss.str()).records);
            }
        } else {
            out.emplace_back(subject_name(input), io::read_gps_csv(input));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

MobilityTrace build_trace(const std::string& subject, std::span<const GpsRecord> records,
                          const RunConfig& cfg) {
    const auto frame = build_frame(records);
    const auto points = project_all(records, frame);
    MobilityTrace trace = extract_events(points, cfg.seg);
    trace = merge_pause_flanked_gaps(trace, cfg.seg);
    trace.subject_id = subject;
    trace.frame = frame;
    return trace;
}

void write_manifest(const RunConfig& cfg, const fs::path& path, const std::string& command) {
    json j;
    j["tool"] = "mobimpute";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["kernel"] = cfg.kernel;
    j["nu"] = cfg.nu;
    j["scale_multiplier"] = cfg.scale_multiplier;
    j["replicates"] = cfg.replicates;
    j["alpha"] = cfg.alpha;
    j["schedule"] = {{"on_s", cfg.schedule.on_s}, {"off_s", cfg.schedule.off_s}};
    j["segmentation"] = {{"pause_radius_m", cfg.seg.pause_radius_m},
                         {"min_pause_s", cfg.seg.min_pause_s},
                         {"gap_threshold_s", cfg.seg.gap_threshold_s},
                         {"pause_merge_m", cfg.seg.pause_merge_m}};
    j["inputs"] = cfg.inputs;
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
}

int cmd_impute(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto inputs = load_inputs(cfg);
    const auto spec = KernelSpec::make(parse_family(cfg.kernel), cfg.nu, cfg.scale_multiplier);
    for (const auto& [subject, records] : inputs) {
        if (records.empty()) {
            std::cerr << "warning: no usable records in " << subject << '\n';
            continue;
        }
        const auto trace = build_trace(subject, records, cfg);
        const auto reps = impute_trace(trace, spec, cfg.replicates, cfg.seed);
        for (std::size_t b = 0; b < reps.size(); ++b) {
            const auto file = fs::path(cfg.out_dir) / (subject + "_rep" + std::to_string(b) + ".csv");
            io::write_event_csv(file, reps[b].events);
        }
    }
    write_manifest(cfg, fs::path(cfg.out_dir) / "manifest.json", "impute");
    return 0;
}

int cmd_features(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto inputs = load_inputs(cfg);
    const auto spec = KernelSpec::make(parse_family(cfg.kernel), cfg.nu, cfg.scale_multiplier);
    std::vector<std::pair<std::string, DailyFeatureVector>> rows;

    for (const auto& [subject, records] : inputs) {
        if (records.empty()) continue;
        const auto trace = build_trace(subject, records, cfg);
        const auto reps = impute_trace(trace, spec, cfg.replicates, cfg.seed);

        // Locations and home come from the observed (pre-imputation) trace.
        std::vector<MobilityTrace> observed{trace};
        auto locations = find_significant_locations(observed, cfg.feat);
        const std::size_t home_idx = estimate_home(locations, cfg.feat);
        const SignificantLocation* home =
            home_idx < locations.size() ? &locations[home_idx] : nullptr;

        // Local-day boundaries over the trace span.
        const double tz = cfg.feat.tz_offset_s;
        const long day_first = static_cast<long>(std::floor((trace.t_first() + tz) / 86400.0));
        const long day_last = static_cast<long>(std::floor((trace.t_last() + tz) / 86400.0));

        std::vector<double> day_starts;
        std::vector<bool> weekend;
        for (long d = day_first; d <= day_last; ++d) {
            day_starts.push_back(d * 86400.0 - tz);
            const int dow = static_cast<int>(((d % 7) + 7 + 4) % 7);  // 0 = Sunday
            weekend.push_back(dow == 0 || dow == 6);
        }

        // Per replicate: daily vectors incl. routine measures.
        std::vector<std::vector<DailyFeatureVector>> per_rep(reps.size());
        for (std::size_t b = 0; b < reps.size(); ++b) {
            std::vector<std::vector<std::vector<double>>> occupancy;
            for (std::size_t di = 0; di < day_starts.size(); ++di) {
                const double ds = day_starts[di];
                const double missing_min = trace.missing_seconds(ds, ds + 86400.0) / 60.0;
                per_rep[b].push_back(compute_daily_features(reps[b], ds, locations, home,
                                                            cfg.feat, missing_min));
                occupancy.push_back(day_occupancy(reps[b], ds, locations, cfg.feat));
            }
            fill_routine_measures(per_rep[b], occupancy, weekend);
        }

        for (std::size_t di = 0; di < day_starts.size(); ++di) {
            std::vector<DailyFeatureVector> across;
            across.reserve(reps.size());
            for (const auto& r : per_rep) across.push_back(r[di]);
            DailyFeatureVector row =
                across.size() >= 2 ? feature_intervals(across, cfg.alpha) : across.front();
            rows.emplace_back(subject + "_day" + std::to_string(di), row);
        }
    }
    io::write_feature_csv(fs::path(cfg.out_dir) / "features.csv", rows, cfg.replicates >= 2);
    write_manifest(cfg, fs::path(cfg.out_dir) / "manifest.json", "features");
    return 0;
}

int cmd_simulate_missingness(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto inputs = load_inputs(cfg);
    for (const auto& [subject, records] : inputs) {
        const auto degraded = impose_missingness(records, cfg.schedule);
        io::write_gps_csv(fs::path(cfg.out_dir) / (subject + "_degraded.csv"), degraded);
    }
    write_manifest(cfg, fs::path(cfg.out_dir) / "manifest.json", "simulate-missingness");
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const auto inputs = load_inputs(cfg);
    std::vector<std::vector<PlanarPoint>> truth;
    for (const auto& [subject, records] : inputs) {
        if (records.size() < 2) continue;
        const auto frame = build_frame(records);
        truth.push_back(project_all(records, frame));
    }
    if (truth.empty()) {
        std::cerr << "error: no usable truth traces\n";
        return 1;
    }
    std::vector<Method> methods;
    for (const auto& name : cfg.methods) methods.push_back(parse_method(name, cfg.nu));

    ErrorTable table;
    try {
        table = evaluate(truth, cfg.schedule, methods, cfg.replicates, cfg.seed, cfg.seg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    io::write_error_table_csv(fs::path(cfg.out_dir) / "error_table.csv", table);
    io::write_error_table_json(fs::path(cfg.out_dir) / "error_table.json", table);
    write_manifest(cfg, fs::path(cfg.out_dir) / "manifest.json", "evaluate");
    return 0;
}

int cmd_analytic(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(fs::path(cfg.out_dir) / "gap_curves.csv", std::ios::binary);
        out << "n,theta0,method,value\n";
        for (int n : cfg.analytic_n) {
            for (double th : cfg.analytic_theta0) {
                AnalyticModel model;
                model.n = n;
                model.theta0 = th;
                out << n << ',' << io::format_double(th) << ",hotdeck_closed,"
                    << io::format_double(expected_gap_hotdeck(model)) << '\n';
                out << n << ',' << io::format_double(th) << ",li_closed,"
                    << io::format_double(expected_gap_li(model)) << '\n';
                out << n << ',' << io::format_double(th) << ",hotdeck_mc,"
                    << io::format_double(monte_carlo_gap(model, GapMethod::HotdeckOracle,
                                                         cfg.analytic_reps, cfg.seed))
                    << '\n';
                out << n << ',' << io::format_double(th) << ",li_mc,"
                    << io::format_double(monte_carlo_gap(model, GapMethod::LinearInterpolation,
                                                         cfg.analytic_reps, cfg.seed))
                    << '\n';
            }
        }
    }
    {
        AnalyticModel model;
        model.n = 400;
        model.theta0 = kPi / 2.0;
        model.d = 10000.0;  // ~100 m flights
        model.sigma_x2 = model.sigma_y2 = 100.0;
        const auto rows = jittered_semicircle(model, cfg.jitter_scale, cfg.jitter_fractions,
                                              cfg.replicates, cfg.alpha, cfg.seed);
        std::ofstream out(fs::path(cfg.out_dir) / "jitter_bias.csv", std::ios::binary);
        out << "missing_fraction,truth_dist,li_dist,tl_mean,tl_lo,tl_hi\n";
        for (const auto& r : rows) {
            out << io::format_double(r.missing_fraction) << ',' << io::format_double(r.truth_dist)
                << ',' << io::format_double(r.li_dist) << ',' << io::format_double(r.tl_mean)
                << ',' << io::format_double(r.tl_lo) << ',' << io::format_double(r.tl_hi) << '\n';
        }
    }
    write_manifest(cfg, fs::path(cfg.out_dir) / "manifest.json", "analytic");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GPS mobility trace imputation and feature toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string config_path, schedule_flag;
    std::uint64_t flag_seed = 0;
    std::string flag_kernel, flag_format, flag_out;
    double flag_scale = 1.0, flag_alpha = 0.05, flag_tz = 0.0;
    int flag_replicates = 100;

    app.add_option("--config", config_path, "JSON config file");
    auto* o_seed = app.add_option("--seed", flag_seed, "RNG seed");
    auto* o_kernel = app.add_option("--kernel", flag_kernel, "TL | GL | GLC | LI");
    auto* o_scale = app.add_option("--scale-mult", flag_scale, "kernel scale multiplier");
    auto* o_reps = app.add_option("--replicates", flag_replicates, "imputation replicates B");
    app.add_option("--schedule", schedule_flag, "ON/OFF minutes, e.g. 2/10");
    auto* o_format = app.add_option("--format", flag_format, "csv | plt");
    auto* o_out = app.add_option("--out", flag_out, "output directory");
    auto* o_alpha = app.add_option("--alpha", flag_alpha, "confidence level alpha");
    auto* o_tz = app.add_option("--tz-offset", flag_tz, "timezone offset seconds");

    std::vector<std::string> positional_inputs;
    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("inputs", positional_inputs, "input files or directories");
    };

    auto* sub_impute = app.add_subcommand("impute", "impute missing intervals");
    auto* sub_features = app.add_subcommand("features", "daily mobility measures");
    auto* sub_simmiss = app.add_subcommand("simulate-missingness", "apply an on/off schedule");
    auto* sub_evaluate = app.add_subcommand("evaluate", "score methods against dense truth");
    auto* sub_analytic = app.add_subcommand("analytic", "closed-form and Monte Carlo gap data");
    for (auto* s : {sub_impute, sub_features, sub_simmiss, sub_evaluate}) add_inputs(s);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config_file(cfg, config_path);
        // flags override the config file
        if (o_seed->count() > 0) cfg.seed = flag_seed;
        if (o_kernel->count() > 0) cfg.kernel = flag_kernel;
        if (o_scale->count() > 0) cfg.scale_multiplier = flag_scale;
        if (o_reps->count() > 0) cfg.replicates = flag_replicates;
        if (o_format->count() > 0) cfg.format = flag_format;
        if (o_out->count() > 0) cfg.out_dir = flag_out;
        if (o_alpha->count() > 0) cfg.alpha = flag_alpha;
        if (o_tz->count() > 0) cfg.feat.tz_offset_s = flag_tz;
        if (!schedule_flag.empty()) parse_schedule_flag(cfg, schedule_flag);
        if (!positional_inputs.empty()) cfg.inputs = positional_inputs;
        if (cfg.replicates < 1 || cfg.alpha <= 0.0 || cfg.alpha >= 1.0) {
            std::cerr << "error: invalid replicates/alpha\n";
            return 2;
        }

        if (app.got_subcommand(sub_impute)) return cmd_impute(cfg);
        if (app.got_subcommand(sub_features)) return cmd_features(cfg);
        if (app.got_subcommand(sub_simmiss)) return cmd_simulate_missingness(cfg);
        if (app.got_subcommand(sub_evaluate)) return cmd_evaluate(cfg);
        if (app.got_subcommand(sub_analytic)) return cmd_analytic(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
