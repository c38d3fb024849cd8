#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rmtlab/dispatch.hpp"
#include "rmtlab/io.hpp"
#include "rmtlab/keyvalue.hpp"
#include "rmtlab/rng.hpp"

using namespace rmtlab;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("key-value parsing") {
  const KeyValueFile kv = KeyValueFile::parse("# comment\n a.kind = goe \n\na.n=10 # trailing\nsizes = 100,200, 400\n", "cfg");
  CHECK(kv.get_string("a.kind") == "goe");
  CHECK(kv.get_size("a.n") == 10);
  CHECK(kv.get_size_list("sizes") == std::vector<std::size_t>{100, 200, 400});
  CHECK(kv.get_double_or("missing", 2.5) == 2.5);
  CHECK_FALSE(kv.has("missing"));

  CHECK(message_of([&] { (void)kv.get_double("samples"); }) == "cfg: missing field 'samples'");
  CHECK(message_of([] { (void)KeyValueFile::parse("x = 1\nx = 2\n", "f"); }).find("f:2") != std::string::npos);
  CHECK(message_of([] { (void)KeyValueFile::parse("a = 1\njunk\n", "f"); }).find("f:2") != std::string::npos);
  const KeyValueFile bad = KeyValueFile::parse("n = 1e3\n", "g");
  const std::string msg = message_of([&] { (void)bad.get_u64("n"); });
  CHECK(msg.find("g:1") != std::string::npos);
  CHECK(msg.find("'n'") != std::string::npos);
  CHECK_THROWS_AS((void)bad.get_u64("n"), ConfigError);

  KeyValueFile over = kv;
  over.set("a.n", "12");
  CHECK(over.get_size("a.n") == 12);
}

TEST_CASE("number parsing ignores the locale") {
  CHECK(parse_double("0.125") == 0.125);
  CHECK(parse_double(" -1e-3 ") == -1e-3);
  CHECK_THROWS_AS(parse_double("0,5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK(parse_u64("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
  CHECK_THROWS_AS(parse_u64("-1"), std::invalid_argument);
}

TEST_CASE("ensemble specs from config") {
  const KeyValueFile ok = KeyValueFile::parse("a.kind = er\na.n = 100\na.q = 5\na.seed = 3\n");
  const EnsembleSpec s = read_ensemble_spec(ok, "a.", true);
  CHECK(s.kind == EnsembleKind::ErdosRenyiAdjacency);
  CHECK(s.q == 5.0);
  CHECK(s.seed == 3);

  const KeyValueFile dense = KeyValueFile::parse("a.kind = er\na.n = 100\na.q = 10\n", "spec");
  const std::string msg = message_of([&] { (void)read_ensemble_spec(dense, "a.", false); });
  CHECK(msg.find("q^2") != std::string::npos);

  const KeyValueFile no_q = KeyValueFile::parse("a.kind = er\na.n = 100\n", "spec");
  CHECK(message_of([&] { (void)read_ensemble_spec(no_q, "a.", false); }) == "spec: missing field 'a.q'");
  const KeyValueFile no_seed = KeyValueFile::parse("kind = goe\nn = 4\n", "spec");
  CHECK(message_of([&] { (void)read_ensemble_spec(no_seed, "", true); }) == "spec: missing field 'seed'");
  const KeyValueFile bad_kind = KeyValueFile::parse("kind = wigner\nn = 4\n", "spec");
  CHECK_THROWS_AS((void)read_ensemble_spec(bad_kind, "", false), ConfigError);
}

TEST_CASE("dispatch") {
  CHECK(experiment_names().size() == 7);
  CHECK(is_experiment("dbm-oracle"));
  CHECK_FALSE(is_experiment("tracy-widom"));
  CHECK_THROWS_AS(run_named_experiment("nope", KeyValueFile{}, 1, 1), ConfigError);
  const KeyValueFile partial = KeyValueFile::parse("a.kind = goe\na.n = 20\nb.kind = goe\nb.n = 20\n", "bulk.cfg");
  CHECK(message_of([&] { (void)run_named_experiment("bulk", partial, 1, 1); }) == "bulk.cfg: missing field 'samples'");

  KeyValueFile full = partial;
  full.set("samples", "4");
  const StatSummary s = run_named_experiment("bulk", full, 1, 1);
  CHECK(s.experiment == "bulk");
  CHECK(s.n_samples == 4);
}

TEST_CASE("number formatting round-trips") {
  RandomStream rng(3);
  for (int k = 0; k < 10000; ++k) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.uniform() * 200.0) - 100);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("FNV-1a") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("artifact writers") {
  const auto dir = std::filesystem::temp_directory_path() / "rmtlab_io_test";
  std::filesystem::remove_all(dir);
  StatSummary s;
  s.experiment = "demo";
  s.values = {1.5, -0.25};
  s.reference_values = {3.0};
  s.ks_to_reference = 0.5;
  s.extras.emplace_back("mean_a", 0.625);
  write_values_csv(dir / "nested" / "v.csv", s);
  CHECK(slurp(dir / "nested" / "v.csv") == "group,value\na,1.5\na,-0.25\nb,3\n");
  write_summary(dir / "s.txt", s, "a.kind=goe", 0.0);
  const KeyValueFile back = KeyValueFile::load(dir / "s.txt");
  CHECK(back.get_string("experiment") == "demo");
  CHECK(back.get_double("ks") == 0.5);
  CHECK(back.get_double("mean_a") == 0.625);
  CHECK(back.has("wall_time_s"));

  SpectralSample sp;
  sp.eigenvalues = {-1.0, 1.0};
  sp.overlaps = std::vector<double>{0.0, 1.0};
  CHECK(spectrum_csv(sp) == "index,eigenvalue,overlap\n1,-1,0\n2,1,1\n");
  SymmetricMatrix m(2);
  m.set(0, 1, 0.5);
  CHECK(matrix_csv(m) == "0,0.5\n0.5,0\n");
  CHECK(dbm_snapshot_header(2) == "t,x_1,x_2\n");
  CHECK(dbm_snapshot_row(DbmState{0.5, {1.0, 2.0}}) == "0.5,1,2\n");
  std::filesystem::remove_all(dir);
}
