// Command line front end: train grasp models from demonstrations, transfer
// them to new clouds, and generate synthetic single-view scans.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "graspkde/archive.hpp"
#include "graspkde/config.hpp"
#include "graspkde/errors.hpp"
#include "graspkde/hand_io.hpp"
#include "graspkde/pipeline.hpp"
#include "graspkde/ply.hpp"
#include "graspkde/random.hpp"
#include "graspkde/synthetic.hpp"
#include "json_util.hpp"

namespace {

using namespace graspkde;

struct TrainOptions {
    std::string hand_path;
    std::vector<std::string> clouds;
    std::vector<std::string> trajs;
    std::vector<std::string> types;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct InferOptions {
    std::string archive_path;
    std::string cloud_path;
    std::string config_path;
    std::string out_path;
    std::size_t top = 5;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct GenOptions {
    std::string shape;
    std::vector<double> dims;
    double density = 1e5;
    std::vector<double> viewpoint = {0.0, 0.0, 1.0};
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out_path;
};

RunConfig resolve_config(const std::string& path, const RunConfig& fallback, bool seed_set,
                         std::uint64_t seed) {
    RunConfig cfg = path.empty() ? fallback : load_config(path);
    if (seed_set) cfg.seed = seed;
    return cfg;
}

int cmd_train(const TrainOptions& opt) {
    if (opt.trajs.size() != opt.clouds.size()) {
        std::cerr << "train: " << opt.clouds.size() << " --cloud but " << opt.trajs.size()
                  << " --traj; each example needs one of each\n";
        return 1;
    }
    if (opt.types.size() != opt.clouds.size() && opt.types.size() != 1) {
        std::cerr << "train: --type must appear once per example, or once for all of them\n";
        return 1;
    }

    const HandDescription hand = load_hand(opt.hand_path);
    const RunConfig cfg = resolve_config(opt.config_path, RunConfig{}, opt.seed_set, opt.seed);

    std::vector<TrainingExample> examples;
    for (std::size_t i = 0; i < opt.clouds.size(); ++i) {
        TrainingExample ex;
        ex.cloud = load_cloud(opt.clouds[i]);
        ex.trajectory = load_trajectory(opt.trajs[i]);
        ex.type = opt.types.size() == 1 ? opt.types[0] : opt.types[i];
        ex.source_id = std::filesystem::path(opt.clouds[i]).stem().string();
        examples.push_back(std::move(ex));
    }

    std::vector<Eigen::MatrixXd> norms;
    const Exec exec = cfg.parallel ? Exec::OpenMP : Exec::Serial;
    const TrainedModels models = run_train(hand, examples, cfg, exec, &norms);

    for (std::size_t t = 0; t < models.types.size(); ++t) {
        const GraspTypeModel& type = models.types[t];
        const ContactSelection& sel = type.contacts.selection;
        std::cout << "grasp type '" << type.name << "', " << norms[t].cols() << " example"
                  << (norms[t].cols() == 1 ? "" : "s") << '\n';
        for (Eigen::Index i = 0; i < norms[t].rows(); ++i) {
            std::cout << "  link " << i << (sel.c(i) ? " [selected]" : " [dropped] ")
                      << " norms:";
            for (Eigen::Index e = 0; e < norms[t].cols(); ++e)
                std::cout << ' ' << std::fixed << std::setprecision(4) << norms[t](i, e);
            std::cout << "  in-contact:";
            for (Eigen::Index e = 0; e < norms[t].cols(); ++e) std::cout << ' ' << sel.b(i, e);
            std::cout << '\n';
        }
        std::cout.unsetf(std::ios::fixed);
    }

    save_archive(models, opt.out_path);
    std::cout << "wrote " << models.types.size() << " grasp type"
              << (models.types.size() == 1 ? "" : "s") << " to " << opt.out_path << '\n';
    return 0;
}

int cmd_infer(const InferOptions& opt) {
    const TrainedModels models = load_archive(opt.archive_path);
    const PointCloud cloud = load_cloud(opt.cloud_path);
    // The archive carries the config the models were trained with; an explicit
    // --config replaces it wholesale.
    const RunConfig cfg = resolve_config(opt.config_path, models.config, opt.seed_set, opt.seed);
    const Exec exec = cfg.parallel ? Exec::OpenMP : Exec::Serial;

    const InferenceReport report = run_infer(models, cloud, cfg, opt.top, exec);
    for (const std::string& name : report.skipped_types)
        std::cerr << "warning: grasp type '" << name << "' does not transfer to this object\n";
    if (report.grasps.empty())
        std::cerr << "warning: no candidate survived the workspace filter; the grasp list is "
                     "empty\n";

    detail::json out;
    out["format_version"] = 1;
    out["grasps"] = detail::json::array();
    for (const GraspResult& g : report.grasps) {
        detail::json jg;
        jg["type"] = g.type;
        jg["wrist"] = detail::pose_to_json(g.state.h_w);
        jg["config"] = detail::vector_to_json(g.state.h_c);
        jg["motor"] = g.state.h_m;
        jg["log_config"] = g.log_c;
        jg["log_query"] = g.log_q;
        jg["log_collision"] = g.log_coll;
        jg["log_raw"] = g.log_c + g.log_q;
        jg["log_normalized"] = g.log_normalized;
        jg["likelihood"] = std::exp(g.log_normalized);
        jg["trajectory"] = detail::trajectory_to_json(g.trajectory);
        out["grasps"].push_back(std::move(jg));
    }
    out["checkpoint_best"] = report.checkpoint_best;
    out["skipped_types"] = report.skipped_types;

    std::ofstream f(opt.out_path);
    if (!f) throw DataError("infer: cannot open " + opt.out_path + " for writing");
    f << out.dump(2) << '\n';
    std::cout << "wrote " << report.grasps.size() << " grasp"
              << (report.grasps.size() == 1 ? "" : "s") << " to " << opt.out_path << '\n';
    return 0;
}

int cmd_gen(const GenOptions& opt) {
    ShapeSpec spec;
    spec.shape = parse_shape(opt.shape);
    const std::size_t want = spec.shape == Shape::Sphere    ? 1
                             : spec.shape == Shape::Cylinder ? 2
                                                             : 3;
    if (opt.dims.size() != want) {
        std::cerr << "gen: shape '" << opt.shape << "' takes " << want << " dimension"
                  << (want == 1 ? "" : "s") << '\n';
        return 1;
    }
    for (std::size_t i = 0; i < opt.dims.size(); ++i)
        spec.dims[static_cast<Eigen::Index>(i)] = opt.dims[i];
    spec.density = opt.density;
    spec.viewpoint = Eigen::Vector3d(opt.viewpoint[0], opt.viewpoint[1], opt.viewpoint[2]);
    spec.noise = opt.noise;

    RandomStream rng(opt.seed);
    const PointCloud cloud = generate_cloud(spec, rng);
    save_cloud(cloud, opt.out_path);
    std::cout << "wrote " << cloud.points.size() << " points to " << opt.out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn grasp models from demonstrations and transfer them to new objects"};
    app.require_subcommand(1);

    TrainOptions topt;
    InferOptions iopt;
    GenOptions gopt;

    CLI::App* train = app.add_subcommand("train", "Learn grasp models from example grasps");
    train->add_option("--hand", topt.hand_path, "Hand description file")->required();
    train->add_option("--cloud", topt.clouds, "Training cloud, one per example")->required();
    train->add_option("--traj", topt.trajs, "Grasp trajectory, one per example")->required();
    train->add_option("--type", topt.types, "Grasp type label, one per example or one for all")
        ->required();
    train->add_option("--config", topt.config_path, "Config file; built-in defaults otherwise");
    train->add_option("--out", topt.out_path, "Model archive to write")->required();
    CLI::Option* tseed = train->add_option("--seed", topt.seed, "Override the config seed");

    CLI::App* infer = app.add_subcommand("infer", "Rank grasps for a new object");
    infer->add_option("archive", iopt.archive_path, "Trained model archive")->required();
    infer->add_option("--cloud", iopt.cloud_path, "Query cloud")->required();
    infer->add_option("--config", iopt.config_path,
                      "Config file; the archive's config otherwise");
    infer->add_option("--out", iopt.out_path, "Grasp list to write")->required();
    infer->add_option("--top", iopt.top, "How many grasps to keep, 0 for all");
    CLI::Option* iseed = infer->add_option("--seed", iopt.seed, "Override the config seed");

    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic single-view cloud");
    gen->add_option("--shape", gopt.shape, "sphere | cylinder | box | ellipsoid")->required();
    gen->add_option("--dims", gopt.dims,
                    "Shape dimensions: radius | radius height | three edges or semi-axes")
        ->required()
        ->expected(1, 3);
    gen->add_option("--density", gopt.density, "Points per square meter of surface");
    gen->add_option("--viewpoint", gopt.viewpoint, "Camera position")->expected(3);
    gen->add_option("--noise", gopt.noise, "Stddev of Gaussian position noise, meters");
    gen->add_option("--seed", gopt.seed, "Sampling seed");
    gen->add_option("--out", gopt.out_path, "PLY file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) {
            topt.seed_set = tseed->count() > 0;
            return cmd_train(topt);
        }
        if (infer->parsed()) {
            iopt.seed_set = iseed->count() > 0;
            return cmd_infer(iopt);
        }
        if (gen->parsed()) return cmd_gen(gopt);
    } catch (const DegenerateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
