#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "cli_fixture.hpp"
#include "krange/generators.hpp"
#include "krange/krange.hpp"
#include "oracles.hpp"

using namespace krange;
using fixtures::diag;
using fixtures::vec;
using io::Json;

namespace {

std::string diag_tuple_text() {
  const Matrix z = Matrix::Zero(2, 2);
  return io::serialize_tuple(SignedOperatorTuple({diag({1, 0.5}), z, z}, Signature::triplet()));
}

std::string slurp(const std::string& path) { return io::read_file(path); }

}  // namespace

TEST_CASE("cli check") {
  Scratch s("krange_cli_check");
  const auto bidisk = s.write("bidisk.json", io::serialize_tuple(bidisk_triplet(2)));
  const auto r = run_cli({"check", bidisk});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["level"] == "full");
  CHECK(j["passed"] == true);
  CHECK(j["tool"] == "krange");
  CHECK(j["version"] == kVersion);
  CHECK(j["tolerances"].contains("residual"));
  CHECK(j["seed"] == 0);
  CHECK(j["checks"]["isometry"]["ok"] == true);
  CHECK(j["checks"]["adjoint_extension"]["ok"] == true);

  const Matrix z = Matrix::Zero(2, 2), i2 = Matrix::Identity(2, 2);
  const auto bad = s.write("bad.json", io::serialize_tuple(SignedOperatorTuple({z, z, i2}, Signature::triplet())));
  const auto rb = run_cli({"check", bad});
  CHECK(rb.code == 1);
  const Json jb = Json::parse(rb.out);
  CHECK(jb["level"] == "invalid");
  CHECK(jb["witnesses"].size() >= 1);
  CHECK(jb["witnesses"][0].size() == 2);

  const auto lower = s.write("lower.json", io::serialize_tuple(SignedOperatorTuple({Matrix(2.0 * i2), z, z}, Signature::triplet())));
  const auto rl = run_cli({"check", lower});
  CHECK(rl.code == 0);
  CHECK(Json::parse(rl.out)["level"] == "lower");

  CHECK(run_cli({"check", s.write("broken.json", "{\"dim\": 2,")}).code == 2);
  CHECK(run_cli({"check", s.path("missing.json")}).code == 2);
  CHECK(run_cli({"check"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);

  const auto out = s.path("report.json");
  CHECK(run_cli({"check", bidisk, "--out", out}).code == 0);
  CHECK(Json::parse(slurp(out))["level"] == "full");
}

TEST_CASE("cli solve") {
  Scratch s("krange_cli_solve");
  const auto tuple = s.write("diag.json", diag_tuple_text());
  const auto u = s.write("u.json", io::serialize_vector(vec({1, 0.5})));

  const auto ex = run_cli({"solve", tuple, u, "--exact"});
  CHECK(ex.code == 0);
  const Json j = Json::parse(ex.out);
  CHECK(j["krein_norm_sq"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j["residual"].get<double>() <= 1e-8);
  CHECK(j["equality_ok"] == true);
  CHECK(j["mode"] == "exact");
  CHECK(j["z"]["blocks"].size() == 3);

  const auto ep = run_cli({"solve", tuple, u, "--eps", "0.7"});
  CHECK(ep.code == 0);
  const Json je = Json::parse(ep.out);
  CHECK(je["krein_norm_sq"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(je["residual"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(je.contains("equality_ok"));

  const auto zero = s.write("zero.json", io::serialize_vector(Vector::Zero(2)));
  const auto rz = run_cli({"solve", tuple, zero, "--exact"});
  CHECK(rz.code == 0);
  CHECK(Json::parse(rz.out)["krein_norm_sq"].get<double>() == 0.0);

  const Matrix zm = Matrix::Zero(2, 2);
  const auto rank1 = s.write("rank1.json", io::serialize_tuple(SignedOperatorTuple({diag({1, 0}), zm, zm}, Signature::triplet())));
  const auto off = s.write("off.json", io::serialize_vector(vec({0, 1})));
  const auto ro = run_cli({"solve", rank1, off, "--exact"});
  CHECK(ro.code == 1);
  const Json jo = Json::parse(ro.out);
  CHECK(jo["error"] == "NotInRange");
  CHECK(jo["witness"]["verdict"] == "not_in_range");
  CHECK(jo["witness"]["adjoint_norm"].get<double>() < 1e-12);
  CHECK(jo["witness"]["ratio_path"].size() >= 2);

  CHECK(run_cli({"solve", tuple, u}).code == 2);
  CHECK(run_cli({"solve", tuple, u, "--exact", "--eps", "0.1"}).code == 2);
  CHECK(run_cli({"solve", tuple, u, "--eps", "0"}).code == 2);
  CHECK(run_cli({"solve", tuple, u, "--eps", "abc"}).code == 2);
  CHECK(run_cli({"solve", tuple, s.write("u3.json", io::serialize_vector(vec({1, 2, 3}))), "--exact"}).code == 2);
  CHECK(run_cli({"solve", tuple, s.write("junk.json", "[1,2]"), "--exact"}).code == 2);
}

TEST_CASE("cli sweep") {
  Scratch s("krange_cli_sweep");
  const auto tuple = s.write("diag.json", diag_tuple_text());
  const auto u = s.write("u.json", io::serialize_vector(vec({1, 0.5})));
  const auto r = run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.7,0.5,6"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line, last;
  std::getline(lines, line);
  CHECK(line == "eps,residual,krein_norm_sq,target_norm_sq,monotone_ok");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    last = line;
    CHECK(line.substr(line.rfind(',') + 1) == "true");
  }
  CHECK(rows == 6);
  const auto c1 = last.find(','), c2 = last.find(',', c1 + 1);
  CHECK(std::stod(last.substr(c1 + 1, c2 - c1 - 1)) <= 1e-8);

  const auto single = run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.3,0.5,1"});
  CHECK(single.code == 0);
  CHECK(std::count(single.out.begin(), single.out.end(), '\n') == 2);

  // Stops above the bottom of the spectrum: final equality fails.
  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.9,0.9,2"}).code == 1);

  const Matrix zm = Matrix::Zero(2, 2);
  const auto rank1 = s.write("rank1.json", io::serialize_tuple(SignedOperatorTuple({diag({1, 0}), zm, zm}, Signature::triplet())));
  const auto off = s.write("off.json", io::serialize_vector(vec({0, 1})));
  const auto ro = run_cli({"sweep", rank1, off, "--eps-grid", "geometric:0.7,0.5,3"});
  CHECK(ro.code == 1);
  CHECK(ro.err.find("not_in_range") != std::string::npos);

  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "linear:1,2,3"}).code == 2);
  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.7,2,3"}).code == 2);
  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.7,0.5"}).code == 2);
  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.7,0.5,2.5"}).code == 2);

  const auto csv = s.path("out.csv");
  CHECK(run_cli({"sweep", tuple, u, "--eps-grid", "geometric:0.7,0.5,6", "--csv", csv}).code == 0);
  CHECK(slurp(csv) == r.out);
}

TEST_CASE("cli generate") {
  Scratch s("krange_cli_generate");
  const auto b = run_cli({"generate", "bidisk", "--n", "3"});
  CHECK(b.code == 0);
  const io::TupleFile f = io::parse_tuple(b.out);
  CHECK(f.dim == 9);
  CHECK(f.meta["generator"] == "bidisk");
  CHECK(f.meta["n"] == 3);

  const auto r1 = run_cli({"generate", "random", "--seed", "7"});
  const auto r2 = run_cli({"generate", "random", "--seed", "7"});
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(io::parse_tuple(r1.out).meta["seed"] == 7);
  CHECK(run_cli({"generate", "random", "--seed", "8"}).out != r1.out);

  const auto c = run_cli({"generate", "corona", "--n", "5"});
  CHECK(c.code == 0);
  CHECK(io::parse_tuple(c.out).to_tuple().level() == Validity::Full);
  CHECK(c.err.empty());

  const auto over = run_cli({"generate", "corona", "--n", "3", "--phi1", "2", "--phi2", "0", "--psi1", "0", "--psi2", "0"});
  CHECK(over.code == 1);
  CHECK(over.err.find("warning") != std::string::npos);
  CHECK(over.out.empty());

  const auto cplx = run_cli({"generate", "corona", "--n", "3", "--phi1", "0:0.5", "--phi2", "0", "--psi1", "0.5", "--psi2", "0"});
  CHECK(cplx.code == 0);
  CHECK(io::parse_tuple(cplx.out).ops[0](0, 0) == Complex(0, 0.5));

  CHECK(run_cli({"generate", "torus"}).code == 2);
  CHECK(run_cli({"generate", "bidisk", "--n", "0"}).code == 2);
  CHECK(run_cli({"generate", "random", "--margin", "1.5"}).code == 2);
  CHECK(run_cli({"generate", "corona", "--phi1", "x"}).code == 2);

  const auto path = s.path("b.json");
  CHECK(run_cli({"generate", "bidisk", "--n", "2", "--out", path}).code == 0);
  // generate -> file -> load -> re-serialize is byte-identical.
  const std::string text = slurp(path);
  CHECK(io::serialize_tuple(io::parse_tuple(text)) == text);
  const std::string rtext = r1.out;
  CHECK(io::serialize_tuple(io::parse_tuple(rtext)) == rtext);
  CHECK(io::serialize_tuple(io::parse_tuple(c.out)) == c.out);
}

TEST_CASE("cli verify") {
  Scratch s("krange_cli_verify");
  const auto b = s.write("b.json", io::serialize_tuple(bidisk_triplet(2)));
  const auto r = run_cli({"verify", b, "--eps", "0.5"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["vacuous"] == false);
  CHECK(j["delta_star"].get<double>() >= j["lemma_bound"].get<double>() - 1e-9);
  CHECK(j["norm_equality"]["max_deviation"].get<double>() <= 1e-7);
  CHECK(j["samples"] == 20);
  CHECK(j["seed"] == 0);

  const auto vac = run_cli({"verify", b, "--eps", "2"});
  CHECK(vac.code == 0);
  CHECK(Json::parse(vac.out)["vacuous"] == true);

  CHECK(run_cli({"verify", s.write("c.json", "{\"dim\": 2, \"signature\": [1], \"ops\": ["), "--eps", "0.5"}).code == 2);
  CHECK(run_cli({"verify", b}).code == 2);
  CHECK(run_cli({"verify", b, "--eps", "-1"}).code == 2);
}

TEST_CASE("cli tolerances: env var, then flags") {
  Scratch s("krange_cli_tol");
  const auto b = s.write("b.json", io::serialize_tuple(bidisk_triplet(2)));
  const Json dflt = Json::parse(run_cli({"check", b}).out);
  CHECK(dflt["tolerances"]["residual"].get<double>() == 1e-8);

  const Json env = Json::parse(run_cli({"check", b}, "residual=1e-6").out);
  CHECK(env["tolerances"]["residual"].get<double>() == 1e-6);

  const Json flag = Json::parse(run_cli({"--tol", "residual=1e-5", "check", b}, "residual=1e-6").out);
  CHECK(flag["tolerances"]["residual"].get<double>() == 1e-5);
  const Json after = Json::parse(run_cli({"check", b, "--tol", "residual=1e-4"}, "residual=1e-6,lemma=1e-3").out);
  CHECK(after["tolerances"]["residual"].get<double>() == 1e-4);
  CHECK(after["tolerances"]["lemma"].get<double>() == 1e-3);

  CHECK(run_cli({"check", b}, "nonsense=1").code == 2);
  CHECK(run_cli({"--tol", "residual=-1", "check", b}).code == 2);
  CHECK(run_cli({"--tol", "residual", "check", b}).code == 2);
}

TEST_CASE("cli output is deterministic") {
  Scratch s("krange_cli_det");
  const auto t = s.write("r.json", run_cli({"generate", "random", "--seed", "3", "--dim", "5"}).out);
  const auto u = s.write("u.json", io::serialize_vector(io::parse_tuple(slurp(t)).to_tuple().defect_sqrt() * Vector::Ones(5)));
  const std::vector<std::vector<std::string>> commands{
      {"check", t, "--seed", "4"},
      {"solve", t, u, "--exact"},
      {"sweep", t, u, "--eps-grid", "geometric:0.5,0.5,12"},
      {"verify", t, "--eps", "0.05", "--seed", "9"},
  };
  for (const auto& args : commands) {
    const auto a = run_cli(args), b = run_cli(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("installed tool honours KRANGE_TOL and the exit-code contract") {
  Scratch s("krange_cli_binary");
  const std::string tool = KRANGE_TOOL_PATH;
  const auto b = s.write("b.json", io::serialize_tuple(bidisk_triplet(2)));
  const auto out = s.path("o.json");
  auto sh = [](const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(sh("KRANGE_TOL=residual=2e-7 '" + tool + "' check '" + b + "' --out '" + out + "'") == 0);
  CHECK(Json::parse(slurp(out))["tolerances"]["residual"].get<double>() == 2e-7);
  CHECK(sh("KRANGE_TOL=residual=2e-7 '" + tool + "' --tol residual=3e-7 check '" + b + "' --out '" + out + "'") == 0);
  CHECK(Json::parse(slurp(out))["tolerances"]["residual"].get<double>() == 3e-7);
  CHECK(sh("'" + tool + "' check '" + s.path("nope.json") + "' 2>/dev/null") == 2);
  CHECK(sh("'" + tool + "' --help > /dev/null") == 0);
}
