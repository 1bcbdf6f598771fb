#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return "/tmp/lpbox_cli_test_" + std::to_string(getpid()) + "_" + tag + "_" +
           std::to_string(counter++);
}

CliResult run_cli(const std::string& args) {
    const std::string out = temp_path("out"), err = temp_path("err");
    const std::string cmd =
        std::string(LPBOX_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    std::remove(out.c_str());
    std::remove(err.c_str());
    return r;
}

std::string write_file(const std::string& tag, const std::string& content) {
    const std::string path = temp_path(tag);
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

const std::string kSmallCode = std::string(LPBOX_CODES_DIR) + "/single_check_n3.alist";
const std::string kBigCode = std::string(LPBOX_CODES_DIR) + "/regular_n96_k48.alist";

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

// Blank the avg_decode_seconds column (the only legitimately run-dependent one).
std::string drop_wall_clock(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string field;
        int idx = 0;
        while (std::getline(fields, field, ',')) {
            if (idx > 0) out << ',';
            out << (idx == 14 ? "X" : field);
            ++idx;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("info reports the code dimensions") {
    auto r = run_cli("info --code " + kSmallCode);
    CHECK(r.code == 0);
    CHECK(r.out.find("N=3 M=1 rank=1 k=2") != std::string::npos);
    CHECK(r.out.find("unchecked_variables=0") != std::string::npos);
    auto big = run_cli("info --code " + kBigCode);
    CHECK(big.code == 0);
    CHECK(big.out.find("N=96 M=48 rank=48 k=48 rate=0.5") != std::string::npos);
}

TEST_CASE("decode solves the single-check example from inline likelihoods") {
    auto r = run_cli("decode --code " + kSmallCode + " --decoder l2box --llr-inline '-1 -2 3'");
    CHECK(r.code == 0);
    CHECK(r.out.find("word: 110") != std::string::npos);
    CHECK(r.out.find("valid: true") != std::string::npos);
    CHECK(r.out.find("termination: converged") != std::string::npos);

    auto bp = run_cli("decode --code " + kSmallCode + " --decoder bp --llr-inline '4 4 -1'");
    CHECK(bp.code == 0);
    CHECK(bp.out.find("word: 000") != std::string::npos);
    CHECK(bp.out.find("iterations: 1") != std::string::npos);

    auto pen =
        run_cli("decode --code " + kSmallCode + " --decoder penalized --llr-inline '-1 -2 3'");
    CHECK(pen.code == 0);
    CHECK(pen.out.find("word: 110") != std::string::npos);
}

TEST_CASE("decode reads likelihoods from a file and emits JSON on request") {
    const std::string llr = write_file("llr", "4 4 -1\n");
    auto r = run_cli("decode --code " + kSmallCode + " --decoder minsum --llr " + llr +
                     " --format json");
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["word"] == "000");
    CHECK(doc["valid"] == true);
    CHECK(doc["decoder"] == "minsum");
    std::remove(llr.c_str());
}

TEST_CASE("decode exits one when the result is not a codeword") {
    auto r = run_cli("decode --code " + kSmallCode + " --decoder minsum --llr-inline '-2 -1 -1'");
    CHECK(r.code == 1);
    CHECK(r.out.find("valid: false") != std::string::npos);
}

TEST_CASE("usage errors exit two") {
    CHECK(run_cli("decode --code " + kSmallCode + " --decoder bogus --llr-inline '1 1 1'").code ==
          2);
    CHECK(run_cli("decode --code /nonexistent.alist --decoder bp --llr-inline '1 1 1'").code == 2);
    CHECK(run_cli("decode --code " + kSmallCode + " --decoder bp").code == 2);  // no llr source
    const std::string llr = write_file("llr2", "1 1 1\n");
    CHECK(run_cli("decode --code " + kSmallCode + " --decoder bp --llr " + llr +
                  " --llr-inline '1 1 1'")
              .code == 2);  // both llr sources
    std::remove(llr.c_str());
    CHECK(run_cli("decode --code " + kSmallCode + " --decoder bp --llr-inline '1 1'").code ==
          2);  // wrong length
    CHECK(run_cli("simulate --code " + kSmallCode + " --decoder bp --snr 2:0:3").code == 2);
    CHECK(run_cli("simulate --code " + kSmallCode + " --decoder penalized --sweep alpha --snr 2")
              .code == 2);  // missing --grid
    CHECK(run_cli("nonsense").code == 2);
    CHECK(run_cli("").code == 2);  // a subcommand is required
}

TEST_CASE("unreadable code files exit three") {
    const std::string junk = write_file("junk", "this is not an alist\n");
    auto r = run_cli("info --code " + junk);
    CHECK(r.code == 3);
    std::remove(junk.c_str());
}

TEST_CASE("simulate streams CSV records to stdout") {
    auto r = run_cli("simulate --code " + kSmallCode +
                     " --decoder bp --snr 1:0.5:3 --errors 5 --trials 200 --seed 3");
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 6);  // header + five points
    CHECK(r.out.rfind("decoder,code,snr_db,alpha,mu1,mu2,", 0) == 0);
    CHECK(r.out.find("\nbp,single_check_n3,1,") != std::string::npos);
    CHECK(r.out.find("\nbp,single_check_n3,3,") != std::string::npos);
}

TEST_CASE("simulate emits a JSON document on request") {
    auto r = run_cli("simulate --code " + kSmallCode +
                     " --decoder l2box --snr 2 --errors 4 --trials 100 --format json");
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["experiment"]["decoder"]["name"] == "l2box");
    CHECK(doc["experiment"]["decoder"].contains("mu1"));
    CHECK(doc["records"].size() == 1);
    CHECK(doc["experiment"]["sweep"] == "snr");
    CHECK(doc["experiment"]["invocation"].is_string());
}

TEST_CASE("simulate writes files plus a metadata sidecar when asked") {
    const std::string out = temp_path("csv") + ".csv";
    auto r = run_cli("simulate --code " + kSmallCode +
                     " --decoder bp --snr 2 --errors 4 --trials 100 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("snr_db") != std::string::npos);  // summary table on stdout
    const std::string csv = slurp(out);
    CHECK(csv.rfind("decoder,code,", 0) == 0);
    CHECK(count_lines(csv) == 2);
    auto meta = nlohmann::json::parse(slurp(out + ".meta.json"));
    CHECK(meta["experiment"]["code"] == "single_check_n3");
    std::remove(out.c_str());
    std::remove((out + ".meta.json").c_str());
}

TEST_CASE("simulate runs parameter sweeps over explicit grids") {
    auto alpha = run_cli("simulate --code " + kBigCode +
                         " --decoder penalized --sweep alpha --grid 0.5:0.5:1 --snr 2"
                         " --errors 3 --trials 100 --seed 2");
    CHECK(alpha.code == 0);
    CHECK(count_lines(alpha.out) == 3);
    CHECK(alpha.out.find(",0.5,5,") != std::string::npos);  // alpha column then mu

    auto mu = run_cli("simulate --code " + kBigCode +
                      " --decoder l2box --sweep mu --grid 10:40:50 --grid2 10 --snr 2"
                      " --errors 3 --trials 100 --seed 2");
    CHECK(mu.code == 0);
    CHECK(count_lines(mu.out) == 3);
    CHECK(mu.out.find(",,10,10,") != std::string::npos);
    CHECK(mu.out.find(",,50,10,") != std::string::npos);
}

TEST_CASE("configuration files set defaults and explicit flags win") {
    const std::string cfg = write_file("cfg",
                                       "decoder=bp\n"
                                       "snr=2\n"
                                       "errors=4\n"
                                       "trials=150\n"
                                       "seed=9\n");
    auto from_file = run_cli("simulate --code " + kSmallCode + " --config " + cfg);
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("\nbp,") != std::string::npos);

    auto overridden = run_cli("simulate --code " + kSmallCode + " --config " + cfg +
                              " --decoder normminsum");
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("\nnormminsum,") != std::string::npos);
    CHECK(overridden.out.find("\nbp,") == std::string::npos);
    std::remove(cfg.c_str());
}

TEST_CASE("decode can trace iterations to a file for the splitting decoders") {
    const std::string trace = temp_path("trace") + ".csv";
    auto r = run_cli("decode --code " + kSmallCode + " --decoder l2box --llr-inline '-1 -2 3'" +
                     " --trace " + trace);
    CHECK(r.code == 0);
    const std::string body = slurp(trace);
    CHECK(body.rfind("iteration,residual_pp,residual_box,objective", 0) == 0);
    CHECK(count_lines(body) >= 2);
    std::remove(trace.c_str());

    auto bad = run_cli("decode --code " + kSmallCode + " --decoder bp --llr-inline '1 1 1'" +
                       " --trace " + trace);
    CHECK(bad.code == 2);
}

TEST_CASE("reruns with one seed are bit-identical and seeds change the draw") {
    const std::string args = "simulate --code " + kSmallCode +
                             " --decoder bp --snr 1 --errors 8 --trials 400 --threads 2";
    auto a = run_cli(args + " --seed 4");
    auto b = run_cli(args + " --seed 4");
    CHECK(a.code == 0);
    CHECK(drop_wall_clock(a.out) == drop_wall_clock(b.out));
    auto c = run_cli(args + " --seed 5");
    CHECK(drop_wall_clock(c.out) != drop_wall_clock(a.out));
}
