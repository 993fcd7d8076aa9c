#include <doctest.h>

#include <string>

#include "fracfilt/config.hpp"
#include "fracfilt/errors.hpp"
#include "fracfilt/output.hpp"

using namespace fracfilt;
using nlohmann::json;

namespace {

std::string failing_field(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("config round trip") {
  const json j = {{"s", 0.3},
                  {"R", 2.0},
                  {"N", 64},
                  {"nonlinearity", {{"name", "table"}, {"u", {0.0, 1.0}}, {"phi", {0.0, 2.0}}}},
                  {"u0", {{"shape", "random"}, {"seed", 9}, {"modes", 5}}},
                  {"tau", 0.1},
                  {"tolerances", {{"newton", 1e-11}}}};
  const RunConfig c = parse_config(j);
  CHECK(c.s == 0.3);
  CHECK(c.nonlinearity.u.size() == 2);
  CHECK(c.u0.seed == 9);
  const json out = to_json(c);
  const RunConfig back = parse_config(json::parse(out.dump()));
  CHECK(to_json(back) == out);
}

TEST_CASE("config validation names the field") {
  CHECK(failing_field({{"s", 1.5}}) == "s");
  CHECK(failing_field({{"d", 2}}) == "d");
  CHECK(failing_field({{"nonlinearity", {{"name", "pme"}, {"m", 0.5}}}}) == "nonlinearity.m");
  CHECK(failing_field({{"u0", {{"shape", "square"}}}}) == "u0.shape");
  CHECK(failing_field({{"tau", -1.0}}) == "tau");
  CHECK(failing_field({{"bogus", 1}}) == "bogus");
  CHECK(failing_field({{"tolerances", {{"newton", "tight"}}}}) == "tolerances.newton");
  CHECK(failing_field({{"alpha", 2.5}}) == "alpha");
  CHECK(failing_field({{"s", 0.25}, {"p", 3.0}}) == "p");
  CHECK(failing_field({{"radii", {1.0, 3.0}}, {"spacing", 0.3}}) == "spacing");
  CHECK(failing_field(json::object()).empty());
}

TEST_CASE("initial shapes") {
  InitialSpec b;
  CHECK(b.build(1.0)(0.0) == doctest::Approx(1.0));
  CHECK(b.build(1.0)(0.6) == 0.0);
  InitialSpec r;
  r.shape = "random";
  r.amplitude = 2.0;
  const auto f = r.build(1.0);
  const auto g = r.build(1.0);
  CHECK(f(0.3) == g(0.3));
  CHECK(std::abs(f(1.0)) < 1e-12);
  InitialSpec p;
  p.shape = "plateau";
  CHECK(p.build(1.0)(0.4) == 1.0);
  CHECK(p.build(1.0)(1.2) == 0.0);
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("CSV layout") {
  const json cfg = {{"s", 0.5}};
  Table empty;
  empty.columns = {"x", "t", "value"};
  CHECK(render_csv(empty, cfg) == "# fracfilt config: {\"s\":0.5}\nx,t,value\n");

  const auto b = build_basis(1.0, 1, 64);
  Trajectory t;
  for (int i = 0; i < 3; ++i) {
    t.times.push_back(0.1 * i);
    t.fields.push_back(Field::mode(b, 1));
  }
  const auto table = trajectory_table(t);
  CHECK(table.rows.size() == 192);
  const std::string csv = render_csv(table, cfg);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 194);
}
