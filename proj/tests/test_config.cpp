#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "graspkde/config.hpp"
#include "graspkde/errors.hpp"

using graspkde::DataError;
using graspkde::RunConfig;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_SUITE("config") {

    TEST_CASE("defaults validate") {
        RunConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        CHECK(cfg.exec() == graspkde::Exec::OpenMP);
        cfg.parallel = false;
        CHECK(cfg.exec() == graspkde::Exec::Serial);
    }

    TEST_CASE("full round trip preserves every field") {
        RunConfig cfg;
        cfg.sigma_p = 0.02;
        cfg.k_query = 321;
        cfg.selection_steps = {2, 30, 70};
        cfg.workspace = {{-1.0, -1.0, 0.0, 1.0, 1.0, 2.0}};
        cfg.seed = 123456789012345ull;
        cfg.parallel = false;
        const auto path = std::filesystem::temp_directory_path() / "graspkde_cfg.json";
        save_config(cfg, path);
        const RunConfig back = graspkde::load_config(path);
        CHECK(back.sigma_p == cfg.sigma_p);
        CHECK(back.k_query == cfg.k_query);
        CHECK(back.selection_steps == cfg.selection_steps);
        REQUIRE(back.workspace.has_value());
        CHECK(*back.workspace == *cfg.workspace);
        CHECK(back.seed == cfg.seed);
        CHECK(back.parallel == cfg.parallel);
        CHECK(back.k_nn == 20);
        std::filesystem::remove(path);
    }

    TEST_CASE("partial files override only their keys") {
        const auto path = write_temp("graspkde_partial.json",
                                     "{\"sigma_p\": 0.02, \"seed\": 7, \"workspace\": null}");
        const RunConfig cfg = graspkde::load_config(path);
        CHECK(cfg.sigma_p == 0.02);
        CHECK(cfg.seed == 7);
        CHECK_FALSE(cfg.workspace.has_value());
        CHECK(cfg.k_nn == 20);
        CHECK(cfg.population == 1000);
        std::filesystem::remove(path);
    }

    TEST_CASE("unknown keys are rejected") {
        const auto path = write_temp("graspkde_typo.json", "{\"sigma_pq\": 0.02}");
        CHECK_THROWS_AS(graspkde::load_config(path), DataError);
        std::filesystem::remove(path);
    }

    TEST_CASE("out-of-range values are rejected") {
        for (const char* body :
             {"{\"zeta\": 1.5}", "{\"retain\": 0.0}", "{\"k_nn\": 2}",
              "{\"workspace\": [0, 0, 0, 1, 1]}", "{\"workspace\": [1, 0, 0, 0, 1, 1]}",
              "{\"sa_steps\": 0}", "{\"selection_steps\": [5, 4000]}",
              "{\"sigma_p\": -0.1}", "{\"population\": \"lots\"}"}) {
            const auto path = write_temp("graspkde_bad.json", body);
            CAPTURE(body);
            CHECK_THROWS_AS(graspkde::load_config(path), DataError);
            std::filesystem::remove(path);
        }
    }

    TEST_CASE("missing or malformed files are data errors") {
        CHECK_THROWS_AS(graspkde::load_config("/nonexistent/graspkde.json"), DataError);
        const auto path = write_temp("graspkde_parse.json", "{toast");
        CHECK_THROWS_AS(graspkde::load_config(path), DataError);
        std::filesystem::remove(path);
    }
}
