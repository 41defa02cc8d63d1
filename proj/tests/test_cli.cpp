#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "ssg/complexity.hpp"
#include "ssg/io.hpp"
#include "ssg/npl.hpp"
#include "ssg/rng.hpp"
#include "ssg/suqr.hpp"

using namespace ssg;
namespace fs = std::filesystem;

namespace {

const std::string cli = SSG_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ssg_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string game_json() {
    SecurityGame g;
    g.num_targets = 3;
    g.num_resources = 1;
    g.payoff = {1.0, -0.5, 0.2, 0.0, 0.8, -0.3, 0.4, -0.1, 0.6};
    g.rewards = {4.0, 6.0, 2.0};
    g.penalties = {-3.0, -1.0, -5.0};
    g.r_max = 10.0;
    g.p_min = -10.0;
    return io::game_to_json(g);
}

}  // namespace

TEST_CASE("cli pipeline: simulate, fit, predict, plan round trip") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());

    CHECK(run("simulate --game " + tmp.file("game.json") +
              " --truth gsuqr --w1 -3 --c 0.5,-0.5 --strategies 12 --attacks 40 --seed 7 "
              "--out " + tmp.file("d.csv")) == 0);
    AttackDataset data = io::read_dataset_csv(tmp.file("d.csv"));
    CHECK(data.size() == 480);
    CHECK(data.num_targets == 3);

    CHECK(run("fit --model gsuqr --data " + tmp.file("d.csv") + " --big-m 20 --out " +
              tmp.file("m.json")) == 0);
    auto model = io::read_model(tmp.file("m.json"));
    CHECK(model.kind == io::LearnedModel::Kind::Gsuqr);

    CHECK(run("predict --model " + tmp.file("m.json") + " --x 0.2,0.3,0.1 --out " +
              tmp.file("q.json")) == 0);
    auto q = nlohmann::json::parse(io::read_file(tmp.file("q.json")));
    double total = 0.0;
    for (const auto& v : q.at("q")) total += v.get<double>();
    CHECK(std::fabs(total - 1.0) <= 1e-12);

    CHECK(run("plan --game " + tmp.file("game.json") + " --model " + tmp.file("m.json") +
              " --starts 8 --seed 3 --out " + tmp.file("plan.json")) == 0);
    std::string plan = io::read_file(tmp.file("plan.json"));
    CHECK(plan.find("utility") != std::string::npos);
}

TEST_CASE("cli fit round trip preserves predictions bit-exactly") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    REQUIRE(run("simulate --game " + tmp.file("game.json") +
                " --truth gsuqr --w1 -2 --c 0.3,0.1 --strategies 8 --attacks 25 --seed 11 "
                "--out " + tmp.file("d.csv")) == 0);
    AttackDataset data = io::read_dataset_csv(tmp.file("d.csv"));
    REQUIRE(run("fit --model gsuqr --data " + tmp.file("d.csv") + " --out " +
                tmp.file("m.json")) == 0);

    // library fit on the same data equals the CLI artifact after the
    // serialize/parse round trip
    auto direct = gsuqr_fit(data, 20.0);
    auto loaded = io::read_model(tmp.file("m.json"));
    CHECK(loaded.gsuqr.w1 == direct.w1);
    CHECK(loaded.gsuqr.c == direct.c);

    MixedStrategy probe({0.25, 0.5, 0.0});
    auto q_direct = direct.predict(probe);
    auto q_loaded = loaded.predictor()(probe);
    for (int i = 0; i < 3; ++i)
        CHECK(std::fabs(q_direct[i] - q_loaded[i]) <= 1e-12);
}

TEST_CASE("cli npl fit round trips through model.json") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    REQUIRE(run("simulate --game " + tmp.file("game.json") +
                " --truth quad --strategies 6 --attacks 30 --seed 13 --out " +
                tmp.file("d.csv")) == 0);
    REQUIRE(run("fit --model npl --khat 2 --data " + tmp.file("d.csv") + " --out " +
                tmp.file("npl.json")) == 0);
    auto model = io::read_model(tmp.file("npl.json"));
    CHECK(model.kind == io::LearnedModel::Kind::Npl);
    model.npl.validate();
    CHECK(run("predict --model " + tmp.file("npl.json") + " --x 0.5,0.25,0.0 --out " +
              tmp.file("q.json")) == 0);

    // serialized model predicts exactly like the in-memory fit
    AttackDataset data = io::read_dataset_csv(tmp.file("d.csv"));
    NplModel direct = npl_fit(data, 2.0, 20.0);
    MixedStrategy probe({0.5, 0.25, 0.0});
    auto q_direct = direct.predict(probe);
    auto q_loaded = model.npl.predict(probe);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(q_direct[i] - q_loaded[i]) <= 1e-12);
}

TEST_CASE("cli eval coarse mode") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    CHECK(run("eval --game " + tmp.file("game.json") +
              " --truth ssuqr --models gsuqr --splits 4 --strategies 8 --attacks 15 "
              "--mode coarse --threshold 0.5 --deltas 0.5 --seed 9 --out " +
              tmp.file("rc.json")) == 0);
    std::string report = io::read_file(tmp.file("rc.json"));
    CHECK(report.find("\"mode\":\"coarse\"") != std::string::npos);
}

TEST_CASE("cli bounds agrees with the library bit-exactly") {
    TempDir tmp;
    REQUIRE(run("bounds --model gsuqr --alpha 0.1 --delta 0.05 --targets 3 --big-m 20 --out " +
                tmp.file("b.json")) == 0);
    complexity::ComplexityQuery q;
    q.alpha = 0.1;
    q.delta = 0.05;
    q.targets = 3;
    q.resources = 1;
    q.big_m = 20.0;
    auto expect = complexity::samples_gsuqr(q);
    std::string want = io::bounds_to_json("gsuqr", expect.samples, expect.ln_samples,
                                          expect.ln_capacity);
    CHECK(io::read_file(tmp.file("b.json")) == want);
}

TEST_CASE("cli eval produces a report and plot csv") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    CHECK(run("eval --game " + tmp.file("game.json") +
              " --truth ssuqr --models gsuqr --splits 6 --strategies 10 --attacks 20 "
              "--deltas 0.1,0.5 --seed 21 --out " + tmp.file("r.json") + " --csv " +
              tmp.file("r.csv")) == 0);
    std::string report = io::read_file(tmp.file("r.json"));
    CHECK(report.find("\"num_splits\":6") != std::string::npos);
    std::string csv = io::read_file(tmp.file("r.csv"));
    CHECK(csv.rfind("m,alpha,delta", 0) == 0);
}

TEST_CASE("cli exit codes") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());

    SUBCASE("missing required flag names it and exits 2") {
        std::string cmd = cli + " fit --model gsuqr --out x.json 2> " + tmp.file("err.txt");
        int status = std::system(cmd.c_str());
        CHECK(WEXITSTATUS(status) == 2);
        std::string err = io::read_file(tmp.file("err.txt"));
        CHECK(err.find("--data") != std::string::npos);
    }
    SUBCASE("unknown flag exits 2") {
        CHECK(run("bounds --model gsuqr --alpha 0.1 --delta 0.05 --targets 3 --bogus 1") == 2);
    }
    SUBCASE("missing input file exits 1") {
        CHECK(run("fit --model gsuqr --data " + tmp.file("absent.csv") + " --out " +
                  tmp.file("m.json")) == 1);
    }
    SUBCASE("invalid parameter value exits 2") {
        CHECK(run("eval --game " + tmp.file("game.json") +
                  " --models gsuqr --splits 3 --seed 1 --out " + tmp.file("r.json")) == 2);
    }
    SUBCASE("malformed input file exits 1") {
        io::atomic_write(tmp.file("broken.json"), "{\"T\": 3, \"K\":");
        CHECK(run("plan --game " + tmp.file("broken.json") + " --model x.json --out " +
                  tmp.file("p.json")) == 1);
    }
}

TEST_CASE("cli eval accepts a fixed dataset source") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    REQUIRE(run("simulate --game " + tmp.file("game.json") +
                " --truth ssuqr --strategies 12 --attacks 25 --seed 2 --out " +
                tmp.file("d.csv")) == 0);
    CHECK(run("eval --game " + tmp.file("game.json") + " --data " + tmp.file("d.csv") +
              " --models gsuqr,ssuqr --splits 5 --deltas 0.25 --seed 4 --out " +
              tmp.file("re.json") + " --csv " + tmp.file("re.csv")) == 0);
    auto report = nlohmann::json::parse(io::read_file(tmp.file("re.json")));
    CHECK(report.at("models").size() == 2);
    // empirical reference: both models scored on the same smoothed labels
    for (const auto& me : report.at("models"))
        CHECK(me.at("alphas").size() == 1);
}

TEST_CASE("dataset csv and game json round trip exactly") {
    TempDir tmp;
    Rng rng(31);
    std::vector<AttackRecord> records;
    for (int r = 0; r < 60; ++r) {
        std::vector<double> x{rng.uniform() * 0.5, rng.uniform() * 0.5, rng.uniform() * 0.5};
        records.push_back({MixedStrategy(x), rng.uniform_int(3)});
    }
    AttackDataset data = dedupe_dataset(records);
    io::atomic_write(tmp.file("d.csv"), io::dataset_to_csv(data));
    AttackDataset back = io::read_dataset_csv(tmp.file("d.csv"));
    REQUIRE(back.size() == data.size());
    for (std::size_t r = 0; r < data.size(); ++r) {
        CHECK(back.records[r].target == data.records[r].target);
        CHECK(back.records[r].strategy.coverage == data.records[r].strategy.coverage);
    }
    CHECK(back.num_anchors() == data.num_anchors());

    io::atomic_write(tmp.file("g.json"), game_json());
    SecurityGame g = io::read_game(tmp.file("g.json"));
    io::atomic_write(tmp.file("g2.json"), io::game_to_json(g));
    SecurityGame g2 = io::read_game(tmp.file("g2.json"));
    CHECK(g2.payoff == g.payoff);
    CHECK(g2.rewards == g.rewards);
    CHECK(g2.penalties == g.penalties);
    CHECK(g2.num_targets == g.num_targets);
    CHECK(g2.num_resources == g.num_resources);
}

TEST_CASE("non-finite sample bounds serialize as the overflow marker") {
    complexity::ComplexityQuery q;
    q.alpha = 0.005;
    q.delta = 0.1;
    q.targets = 60;
    q.resources = 29;
    q.big_m = 20.0;
    q.khat = 1.0;
    auto res = complexity::samples_npl(q);
    REQUIRE(std::isinf(res.samples));
    std::string json = io::bounds_to_json("npl", res.samples, res.ln_samples, res.ln_capacity);
    CHECK(json.find("\"m\":\"inf-overflow\"") != std::string::npos);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed.at("ln_m").get<double>() == res.ln_samples);
}

TEST_CASE("cli reruns are byte identical") {
    TempDir tmp;
    io::atomic_write(tmp.file("game.json"), game_json());
    for (std::string run_id : {"a", "b"}) {
        REQUIRE(run("simulate --game " + tmp.file("game.json") +
                    " --truth ssuqr --strategies 10 --attacks 30 --seed 5 --out " +
                    tmp.file("d" + run_id + ".csv")) == 0);
        REQUIRE(run("fit --model npl --khat 2 --data " + tmp.file("d" + run_id + ".csv") +
                    " --out " + tmp.file("m" + run_id + ".json")) == 0);
    }
    CHECK(io::read_file(tmp.file("da.csv")) == io::read_file(tmp.file("db.csv")));
    CHECK(io::read_file(tmp.file("ma.json")) == io::read_file(tmp.file("mb.json")));
}
