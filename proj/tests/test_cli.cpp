#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return PREDSIM_CLI_PATH; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("predsim_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name) const { return path / name; }
};

int run(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null";
    cmd += stderr_to.empty() ? " 2>/dev/null" : " 2>" + stderr_to.string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string valid_config(double penalty = 0.0) {
    nlohmann::json j = {
        {"complex_predicate",
         {{"predicates",
           {{{"id", "p1"}, {"selectivity", 0.5}, {"accuracy_mean", 0.7}},
            {{"id", "p2"}, {"selectivity", 0.5}, {"accuracy_mean", 0.7}}}},
          {"penalty", penalty}}},
        {"item_count", 40},
        {"generation_mode", {{"mode", "class_distribution"}, {"in_fraction", 0.4}}},
        {"budget_b", 3},
        {"beta_weights", {1.0, 10.0}},
        {"trials", 6},
    };
    return j.dump(2);
}

}  // namespace

TEST_CASE("simulate writes the results csv and exits 0") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config());
    const auto out = tmp.file("r.csv");
    CHECK(run("simulate --config " + tmp.file("c.json").string() + " --seed 7 --out " +
              out.string()) == 0);
    const auto text = slurp(out);
    CHECK(text.rfind("design,n,selectivities,mu_list,sigma2,budget,gamma,trial,"
                     "precision,recall,beta,f_beta,cost_labels\n", 0) == 0);
    // 6 trials x 3 designs x 2 betas
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 6 * 3 * 2);
}

TEST_CASE("same seed gives byte-identical outputs, different seed differs") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config());
    const std::string base = "simulate --config " + tmp.file("c.json").string();
    CHECK(run(base + " --seed 7 --out " + tmp.file("a.csv").string()) == 0);
    CHECK(run(base + " --seed 7 --out " + tmp.file("b.csv").string()) == 0);
    CHECK(run(base + " --seed 8 --out " + tmp.file("d.csv").string()) == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
    CHECK(slurp(tmp.file("a.csv")) != slurp(tmp.file("d.csv")));
}

TEST_CASE("thread count does not change the output") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config());
    const std::string base = "simulate --config " + tmp.file("c.json").string() + " --seed 3";
    CHECK(run(base + " --threads 1 --out " + tmp.file("t1.csv").string()) == 0);
    CHECK(run(base + " --threads 4 --out " + tmp.file("t4.csv").string()) == 0);
    CHECK(slurp(tmp.file("t1.csv")) == slurp(tmp.file("t4.csv")));
}

TEST_CASE("invalid penalty exits 1 and names the bound") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config(1.5));
    const auto err = tmp.file("err.txt");
    CHECK(run("simulate --config " + tmp.file("c.json").string() + " --seed 7 --out " +
              tmp.file("r.csv").string(), err) == 1);
    CHECK(slurp(err).find("penalty") != std::string::npos);
}

TEST_CASE("missing input file exits 2") {
    TempDir tmp;
    CHECK(run("simulate --config " + tmp.file("absent.json").string() +
              " --seed 7 --out " + tmp.file("r.csv").string()) == 2);
}

TEST_CASE("usage errors exit 1") {
    TempDir tmp;
    CHECK(run("") == 1);
    CHECK(run("simulate") == 1);  // missing required flags
    CHECK(run("frobnicate --config x") == 1);
}

TEST_CASE("sweep runs the cartesian grid") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config());
    write_file(tmp.file("g.json"), R"({"mu": [0.6, 0.8], "b": [3], "beta": [1.0]})");
    const auto out = tmp.file("s.csv");
    CHECK(run("sweep --grid " + tmp.file("g.json").string() + " --config " +
              tmp.file("c.json").string() + " --seed 5 --out " + out.string()) == 0);
    // 2 points x 3 designs x 6 trials x 1 beta
    const auto csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3 * 6);
}

TEST_CASE("analyze round trips a logged trial") {
    TempDir tmp;
    write_file(tmp.file("c.json"), valid_config());
    CHECK(run("simulate --config " + tmp.file("c.json").string() + " --seed 11 --out " +
              tmp.file("r.csv").string() + " --log-judgments " +
              tmp.file("j.csv").string() + " --log-truth " + tmp.file("t.csv").string() +
              " --log-trial 1") == 0);
    CHECK(run("analyze --judgments " + tmp.file("j.csv").string() + " --truth " +
              tmp.file("t.csv").string() + " --out " + tmp.file("a.json").string()) == 0);
    const auto report = nlohmann::json::parse(slurp(tmp.file("a.json")));
    CHECK(report.contains("f1"));
    CHECK(report["f1"].contains("baseline"));
    CHECK(report["f1"].contains("p1_and_p2"));
    CHECK(report.contains("kruskal_wallis"));

    // the engine's own csv carries the same f1 for the logged trial
    const auto results_csv = slurp(tmp.file("r.csv"));
    std::istringstream lines(results_csv);
    std::string line;
    std::getline(lines, line);  // header
    double engine_f1 = -1.0;
    while (std::getline(lines, line)) {
        // design,...,trial,precision,recall,beta,f_beta,cost
        if (line.rfind("baseline,", 0) != 0) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.at(7) == "1" && fields.at(10) == "1") engine_f1 = std::stod(fields.at(11));
    }
    REQUIRE(engine_f1 >= 0.0);
    CHECK(report["f1"]["baseline"].get<double>() == engine_f1);
}

TEST_CASE("analyze rejects malformed logs with exit 1") {
    TempDir tmp;
    write_file(tmp.file("j.csv"),
               "worker_id,item_id,condition,predicate_id,answer,decision_time_s\n"
               "w1,i1,baseline,complex,7,\n");
    write_file(tmp.file("t.csv"), "item_id,p_1,p_2,in_label\ni1,1,1,1\n");
    const auto err = tmp.file("err.txt");
    CHECK(run("analyze --judgments " + tmp.file("j.csv").string() + " --truth " +
              tmp.file("t.csv").string() + " --out " + tmp.file("a.json").string(),
              err) == 1);
    CHECK(slurp(err).find("line 2") != std::string::npos);
}
