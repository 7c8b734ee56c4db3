#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "panqa/band.hpp"
#include "panqa/fusion.hpp"
#include "panqa/raster_io.hpp"
#include "panqa/report.hpp"
#include "panqa/spatial.hpp"
#include "panqa/synth.hpp"
#include "panqa/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(csv.substr(pos));
            break;
        }
        out.push_back(csv.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

panqa::ImageFormat format_from_extension(const fs::path& path) {
    return path.extension() == ".csv" ? panqa::ImageFormat::Csv : panqa::ImageFormat::Pgm;
}

std::vector<std::string> default_band_names(std::size_t count) {
    if (count == 3) return {"r", "g", "b"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) names.push_back("b" + std::to_string(i + 1));
    return names;
}

panqa::MultibandImage load_image(const std::vector<std::string>& paths,
                                 const std::vector<std::string>& names) {
    panqa::MultibandImage image;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        image.add(names[i], panqa::load_band(paths[i], format_from_extension(paths[i])));
    }
    return image;
}

std::vector<std::string> resolve_band_names(std::size_t count, const std::string& override_csv) {
    if (override_csv.empty()) return default_band_names(count);
    std::vector<std::string> names = split_list(override_csv);
    if (names.size() != count) {
        throw panqa::Error("--band-names lists " + std::to_string(names.size()) +
                           " names for " + std::to_string(count) + " bands");
    }
    return names;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw panqa::Error("cannot create output directory '" + dir.string() + "'");
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw panqa::Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw panqa::Error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
    int rows = 64, cols = 64, scale = 4, octaves = 4;
    std::uint64_t seed = 1;
    std::string out_dir;
};

int run_synth(const SynthArgs& args) {
    panqa::SynthSpec spec;
    spec.rows = args.rows;
    spec.cols = args.cols;
    spec.scale = args.scale;
    spec.seed = args.seed;
    spec.texture_octaves = args.octaves;
    const panqa::SceneBundle scene = panqa::synth_scene(spec);

    ensure_out_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    std::vector<std::string> files;
    auto write_pgm = [&](const std::string& name, const panqa::Band& band) {
        panqa::save_band(band, dir / name, panqa::ImageFormat::Pgm);
        files.push_back(name);
    };
    write_pgm("pan.pgm", scene.pan);
    for (const auto& [name, band] : scene.ms_low.bands) write_pgm("ms_low_" + name + ".pgm", band);
    for (const auto& [name, band] : scene.truth->bands) write_pgm("truth_" + name + ".pgm", band);

    ordered_json manifest{
        {"out_dir", args.out_dir}, {"rows", spec.rows},   {"cols", spec.cols},
        {"scale", spec.scale},     {"seed", spec.seed},   {"octaves", spec.texture_octaves},
        {"bit_depth", spec.bit_depth}, {"files", files},  {"version", panqa::kVersion},
    };
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

// ----------------------------------------------------------------- fuse ---

struct FuseArgs {
    std::string pan_path;
    std::string ms_csv;
    std::string method = "upsample";
    int lowpass_size = panqa::kDefaultLowpassSize;
    std::string band_names;
    std::string out_dir = ".";
};

int run_fuse(const FuseArgs& args) {
    const std::vector<std::string> ms_paths = split_list(args.ms_csv);
    const std::vector<std::string> names = resolve_band_names(ms_paths.size(), args.band_names);

    panqa::SceneBundle scene;
    scene.pan = panqa::load_band(args.pan_path, format_from_extension(args.pan_path));
    scene.ms_low = load_image(ms_paths, names);
    if (scene.ms_low.rows() == scene.pan.rows && scene.ms_low.cols() == scene.pan.cols) {
        scene.ms_up = scene.ms_low;
    } else {
        scene.ms_up = panqa::upsample_nearest(scene.ms_low, scene.pan.rows, scene.pan.cols);
    }

    panqa::FusionMethod method;
    method.kind = panqa::parse_fusion_kind(args.method);
    method.lowpass_size = args.lowpass_size;
    const panqa::FusionResult result = panqa::fuse(scene, method);

    ensure_out_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    ordered_json manifest{{"method", args.method}, {"out_dir", args.out_dir}};
    std::vector<std::string> files;
    for (const auto& [name, band] : result.image.bands) {
        const std::string file = "fused_" + name + ".pgm";
        panqa::save_band(band, dir / file, panqa::ImageFormat::Pgm);
        files.push_back(file);
    }
    manifest["files"] = files;
    if (method.kind == panqa::FusionKind::Hfm) {
        manifest["excluded_pixels"] = result.excluded_pixels;
    }
    manifest["version"] = panqa::kVersion;
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------- evaluate ---

struct EvaluateArgs {
    std::string reference_csv;
    std::string pan_path;
    std::vector<std::string> fused_specs;  // name=path,path,...
    std::vector<std::string> formats;      // csv|json|md, repeatable or comma lists
    double peak = panqa::kDefaultPeak;
    std::string hpdi = "both";
    std::string sg_normalizer = "printed";
    std::string scene_id = "scene";
    std::string band_names;
    std::string out_dir = ".";
};

int run_evaluate(const EvaluateArgs& args) {
    const std::vector<std::string> reference_paths = split_list(args.reference_csv);
    const std::vector<std::string> names =
        resolve_band_names(reference_paths.size(), args.band_names);

    const panqa::Band pan = panqa::load_band(args.pan_path, format_from_extension(args.pan_path));
    panqa::MultibandImage reference = load_image(reference_paths, names);
    if (reference.rows() != pan.rows || reference.cols() != pan.cols) {
        reference = panqa::upsample_nearest(reference, pan.rows, pan.cols);
    }

    std::vector<std::pair<std::string, panqa::MultibandImage>> groups;
    ordered_json fused_echo = ordered_json::array();
    for (const std::string& spec : args.fused_specs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
            throw panqa::Error("--fused expects name=path[,path...], got '" + spec + "'");
        }
        const std::string method = spec.substr(0, eq);
        const std::vector<std::string> paths = split_list(spec.substr(eq + 1));
        if (paths.size() != names.size()) {
            throw panqa::Error("fused group '" + method + "' has " +
                               std::to_string(paths.size()) + " bands, reference has " +
                               std::to_string(names.size()));
        }
        groups.emplace_back(method, load_image(paths, names));
        fused_echo.push_back(ordered_json{{"name", method}, {"paths", paths}});
    }

    panqa::EvaluationOptions options;
    options.peak = args.peak;
    options.hpdi = panqa::parse_hpdi_variant(args.hpdi);
    options.sg_normalizer = panqa::parse_sg_normalizer(args.sg_normalizer);
    options.scene_id = args.scene_id;

    panqa::EvaluationReport report =
        panqa::build_evaluation_report(reference, pan, groups, options);

    std::vector<std::string> formats;
    for (const std::string& chunk : args.formats) {
        for (const std::string& f : split_list(chunk)) formats.push_back(f);
    }
    if (formats.empty()) formats = {"json", "csv", "md"};

    report.config["inputs"] = ordered_json{
        {"reference", reference_paths}, {"pan", args.pan_path}, {"fused", fused_echo}};
    report.config["formats"] = formats;

    ensure_out_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    std::vector<std::string> written;
    for (const std::string& format : formats) {
        if (format == "json") {
            write_text(dir / "report.json", panqa::to_json_string(report));
            written.push_back("report.json");
        } else if (format == "csv") {
            write_text(dir / "report_spectral.csv", panqa::to_csv_spectral(report));
            write_text(dir / "report_spatial.csv", panqa::to_csv_spatial(report));
            written.push_back("report_spectral.csv");
            written.push_back("report_spatial.csv");
        } else if (format == "md") {
            write_text(dir / "report.md", panqa::to_markdown(report));
            written.push_back("report.md");
        } else {
            throw panqa::Error("unknown format '" + format + "' (expected csv|json|md)");
        }
    }
    write_text(dir / "report_long.csv", panqa::to_long_csv(report));
    written.push_back("report_long.csv");

    for (const std::string& file : written) std::cout << (dir / file).string() << "\n";
    if (report.error_cell_count > 0) {
        std::cout << "completed with " << report.error_cell_count << " flagged cells\n";
        return 2;
    }
    return 0;
}

// -------------------------------------------------------------- version ---

int run_version(bool as_json) {
    if (as_json) {
        ordered_json doc{{"version", panqa::kVersion},
                         {"defaults",
                          ordered_json{{"peak", panqa::kDefaultPeak},
                                       {"lowpass", panqa::kDefaultLowpassSize},
                                       {"hpdi", "both"},
                                       {"sg_normalizer", "printed"}}}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "panqa " << panqa::kVersion << " (peak=" << panqa::kDefaultPeak
                  << ", lowpass=" << panqa::kDefaultLowpassSize
                  << ", hpdi=both, sg-normalizer=printed)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pan-sharpening quality assessment toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a deterministic synthetic scene");
    synth->add_option("--rows", synth_args.rows, "PAN rows")->required();
    synth->add_option("--cols", synth_args.cols, "PAN cols")->required();
    synth->add_option("--scale", synth_args.scale, "MS downscale factor (>= 2)")->required();
    synth->add_option("--seed", synth_args.seed, "RNG seed")->required();
    synth->add_option("--octaves", synth_args.octaves, "texture octaves")->capture_default_str();
    synth->add_option("--out-dir", synth_args.out_dir, "output directory")->required();

    FuseArgs fuse_args;
    CLI::App* fuse = app.add_subcommand("fuse", "Fuse MS bands with a PAN image");
    fuse->add_option("--pan", fuse_args.pan_path, "PAN image path")->required();
    fuse->add_option("--ms", fuse_args.ms_csv, "comma-separated MS band paths")->required();
    fuse->add_option("--method", fuse_args.method, "upsample|ihs|hfa|hfm")->required();
    fuse->add_option("--lowpass-size", fuse_args.lowpass_size, "box low-pass side (odd >= 3)")->capture_default_str();
    fuse->add_option("--band-names", fuse_args.band_names, "comma-separated band names");
    fuse->add_option("--out-dir", fuse_args.out_dir, "output directory")->capture_default_str();

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score fused images against a reference");
    evaluate->add_option("--reference", eval_args.reference_csv,
                         "comma-separated reference MS band paths")->required();
    evaluate->add_option("--pan", eval_args.pan_path, "PAN image path")->required();
    evaluate->add_option("--fused", eval_args.fused_specs,
                         "fused group as name=path[,path...]; repeatable")->required();
    evaluate->add_option("--format", eval_args.formats, "csv|json|md (repeatable; default all)");
    evaluate->add_option("--peak", eval_args.peak, "NRMSE peak")->capture_default_str();
    evaluate->add_option("--hpdi", eval_args.hpdi, "abs|signed|both")->capture_default_str();
    evaluate->add_option("--sg-normalizer", eval_args.sg_normalizer, "printed|interior")->capture_default_str();
    evaluate->add_option("--scene-id", eval_args.scene_id, "report label")->capture_default_str();
    evaluate->add_option("--band-names", eval_args.band_names, "comma-separated band names");
    evaluate->add_option("--out-dir", eval_args.out_dir, "output directory")->capture_default_str();

    bool version_json = false;
    CLI::App* version = app.add_subcommand("version", "Print version and defaults");
    version->add_flag("--json", version_json, "emit JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_synth(synth_args);
        if (fuse->parsed()) return run_fuse(fuse_args);
        if (evaluate->parsed()) return run_evaluate(eval_args);
        if (version->parsed()) return run_version(version_json);
    } catch (const panqa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
