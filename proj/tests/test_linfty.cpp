#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include "dq/brackets.hpp"
#include "dq/connection.hpp"
#include "dq/rng.hpp"

using namespace dq;

namespace {

Poly x(int i) { return Poly::variable(2, i); }

// Gamma^1_{11} = x2 (1-based labels), no form.
Connection fixture_plain() { return Connection(2, {{0, 0, 0, x(1)}}); }

// Gamma^2_{11} = x2 with the standard symplectic form; comes from the totally
// symmetric lowered tensor G_{111} = x2.
Connection fixture_parallel() {
  return Connection(2, {{1, 0, 0, x(1)}}, standard_omega(2));
}

Connection flat_connection() { return Connection(2, {}); }

Poly random_linear(Rng& rng) {
  Poly p = Poly::constant(2, Rational(static_cast<long>(rng.below(5)) - 2));
  p += x(0) * Rational(static_cast<long>(rng.below(5)) - 2);
  p += x(1) * Rational(static_cast<long>(rng.below(5)) - 2);
  return p;
}

Connection random_torsion_free(uint64_t seed) {
  Rng rng(seed);
  std::vector<std::tuple<int, int, int, Poly>> entries;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) entries.emplace_back(k, a, b, random_linear(rng));
  return Connection(2, entries);
}

Connection random_symplectic(uint64_t seed) {
  Rng rng(seed);
  // Totally symmetric lowered tensor with linear entries, raised by the
  // inverse of the standard form.
  std::map<std::vector<int>, Poly> low;
  for (int a = 0; a < 2; ++a)
    for (int b = a; b < 2; ++b)
      for (int c = b; c < 2; ++c) low[{a, b, c}] = random_linear(rng);
  auto low_at = [&](int a, int b, int c) {
    std::vector<int> k{a, b, c};
    std::sort(k.begin(), k.end());
    return low[k];
  };
  Matrix winv{{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}};
  std::vector<std::tuple<int, int, int, Poly>> entries;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        Poly s(2);
        for (int m = 0; m < 2; ++m)
          if (winv[k][m] != 0) s += low_at(m, a, b) * winv[k][m];
        entries.emplace_back(k, a, b, s);
      }
  return Connection(2, entries, standard_omega(2));
}

Rational q(long n, long d) { return Rational(n) / Rational(d); }

}  // namespace

TEST_CASE("flat connection gives a strict tower") {
  BracketSystem br = build_brackets(flat_connection(), 4);
  for (int n = 1; n <= 4; ++n) CHECK(bracket_tensor(br, n).empty());
  for (const auto& r : check_homotopy_identities(br, 4)) CHECK(r.is_zero);
}

TEST_CASE("unary piece reproduces the connection") {
  BracketSystem br = build_brackets(fixture_plain(), 2);
  BracketTensor t1 = bracket_tensor(br, 1);
  CHECK(t1.size() == 1);
  CHECK(tensor_at(t1, 2, 0, 0, {0}) == x(1));
  CHECK(tensor_at(t1, 2, 0, 0, {1}).is_zero());
  CHECK(tensor_at(t1, 2, 1, 0, {0}).is_zero());
}

TEST_CASE("quadratic coefficients match the curvature average") {
  Connection c = fixture_plain();
  BracketSystem br = build_brackets(c, 2);
  BracketTensor t2 = bracket_tensor(br, 2);
  CHECK(tensor_at(t2, 2, 0, 0, {0, 1}) == Poly::constant(2, q(1, 6)));
  CHECK(tensor_at(t2, 2, 0, 0, {1, 0}) == Poly::constant(2, q(1, 6)));
  CHECK(tensor_at(t2, 2, 0, 1, {0, 0}) == Poly::constant(2, q(-1, 3)));
  CHECK(t2.size() == 2);
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
          Poly expect = (c.curvature(k, n, m, a) + c.curvature(k, m, n, a)) * q(1, 6);
          CHECK(tensor_at(t2, 2, k, a, {m, n}) == expect);
        }
}

TEST_CASE("cubic coefficients of the build example") {
  BracketSystem br = build_brackets(fixture_plain(), 3);
  BracketTensor t3 = bracket_tensor(br, 3);
  Poly mx2_36 = x(1) * q(-1, 36);
  Poly x2_12 = x(1) * q(1, 12);
  CHECK(tensor_at(t3, 2, 0, 0, {0, 0, 1}) == mx2_36);
  CHECK(tensor_at(t3, 2, 0, 0, {0, 1, 0}) == mx2_36);
  CHECK(tensor_at(t3, 2, 0, 0, {1, 0, 0}) == mx2_36);
  CHECK(tensor_at(t3, 2, 0, 1, {0, 0, 0}) == x2_12);
  CHECK(t3.size() == 2);
}

TEST_CASE("parallel-form fixture quadratic coefficients") {
  Connection c = fixture_parallel();
  CHECK(c.is_omega_parallel());
  BracketSystem br = build_brackets(c, 2);
  BracketTensor t2 = bracket_tensor(br, 2);
  CHECK(tensor_at(t2, 2, 1, 0, {0, 1}) == Poly::constant(2, q(1, 6)));
  CHECK(tensor_at(t2, 2, 1, 1, {0, 0}) == Poly::constant(2, q(-1, 3)));
  CHECK(t2.size() == 2);
}

TEST_CASE("identities vanish through arity five") {
  for (const Connection& c : {fixture_plain(), fixture_parallel(), random_torsion_free(17),
                              random_symplectic(99)}) {
    BracketSystem br = build_brackets(c, 5);
    auto reports = check_homotopy_identities(br, 5);
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) {
      CHECK(r.is_zero);
      CHECK(r.nonzero_entries == 0);
    }
  }
}

TEST_CASE("perturbed tower fails the identities") {
  BracketSystem br = build_brackets(fixture_plain(), 4);
  Poly e1 = Poly::variable(4, 2);
  br.comp_mut(2, 0, 1) += Poly::variable(4, 0) * e1 * e1;
  auto reports = check_homotopy_identities(br, 4);
  CHECK_FALSE(reports[2].is_zero);
}

TEST_CASE("pairing invariance at arity one tracks the parallel form") {
  Connection good = fixture_parallel();
  auto rep = check_pairing_invariance(build_brackets(good, 1), *good.omega(), 1);
  CHECK(rep[0].is_zero);

  Connection bad(2, {{1, 0, 0, x(1)}, {0, 0, 0, x(0)}}, standard_omega(2));
  CHECK_FALSE(bad.is_omega_parallel());
  auto rep2 = check_pairing_invariance(build_brackets(bad, 1), *bad.omega(), 1);
  CHECK_FALSE(rep2[0].is_zero);
}

TEST_CASE("pairing invariance fails at the first transposition beyond arity one") {
  Connection c = fixture_parallel();
  BracketSystem br = build_brackets(c, 4);
  auto reports = check_pairing_invariance(br, *c.omega(), 4);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].is_zero);
  CHECK_FALSE(reports[1].is_zero);
  CHECK(reports[1].transposition_nonzero == std::vector<int>{2, 0});
  // sparse fixture: the arity-3 layer happens to cancel
  CHECK(reports[2].is_zero);
  CHECK_FALSE(reports[3].is_zero);
  CHECK(reports[3].transposition_nonzero == std::vector<int>{2, 0, 0, 0});

  // The offending arity-2 pair, written out.
  BracketTensor t2 = bracket_tensor(br, 2);
  const Matrix& w = *c.omega();
  auto lowered = [&](int i0, int a, std::vector<int> idx) {
    Poly s(2);
    for (int k = 0; k < 2; ++k)
      if (w[i0][k] != 0) s += tensor_at(t2, 2, k, a, idx) * w[i0][k];
    return s;
  };
  CHECK(lowered(0, 0, {1, 0}) == Poly::constant(2, q(1, 6)));
  CHECK(lowered(1, 0, {0, 0}).is_zero());

  Connection g = random_symplectic(4242);
  auto grep = check_pairing_invariance(build_brackets(g, 2), *g.omega(), 2);
  CHECK(grep[0].is_zero);
  CHECK_FALSE(grep[1].is_zero);
}

TEST_CASE("gauge symmetrization vanishes") {
  for (const Connection& c : {fixture_plain(), fixture_parallel(), random_torsion_free(5)}) {
    BracketSystem br = build_brackets(c, 4);
    for (int n = 2; n <= 4; ++n) CHECK(check_gauge_condition(br, n));
  }
}

TEST_CASE("diagonal shuffle residual vanishes") {
  for (const Connection& c : {fixture_plain(), fixture_parallel(), random_torsion_free(23)}) {
    BracketSystem br = build_brackets(c, 5);
    for (int n = 2; n <= 5; ++n) {
      ShuffleReport rep = shuffle_cancellation_check(br, n);
      CHECK(rep.is_zero);
      CHECK(rep.nonzero_entries == 0);
    }
  }
}

TEST_CASE("tower respects linear frame changes") {
  Rng rng(321);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix A;
    do {
      A = Matrix(2, std::vector<Rational>(2));
      for (auto& row : A)
        for (auto& v : row) v = Rational(static_cast<long>(rng.below(5)) - 2);
    } while (matrix_det(A) == 0);
    Matrix B = matrix_inverse(A);

    Connection base = random_torsion_free(1000 + trial);
    Connection moved = conjugate_connection(base, A);
    BracketSystem brb = build_brackets(base, 3);
    BracketSystem brm = build_brackets(moved, 3);
    for (int n = 1; n <= 3; ++n) {
      BracketTensor tb = bracket_tensor(brb, n);
      BracketTensor tm = bracket_tensor(brm, n);
      std::vector<int> tuple(n + 2, 0);
      for (;;) {
        const int k = tuple[0], a = tuple[1];
        std::vector<int> idx(tuple.begin() + 2, tuple.end());
        Poly expect(2);
        std::vector<int> src(n + 2, 0);
        for (;;) {
          Rational f = A[k][src[0]] * B[src[1]][a];
          for (int t = 0; t < n; ++t) f *= B[src[2 + t]][idx[t]];
          if (f != 0) {
            std::vector<int> sidx(src.begin() + 2, src.end());
            Poly v = tensor_at(tb, 2, src[0], src[1], sidx);
            if (!v.is_zero()) expect += compose_linear(v, B) * f;
          }
          int pos = n + 1;
          while (pos >= 0 && src[pos] == 1) src[pos--] = 0;
          if (pos < 0) break;
          ++src[pos];
        }
        CHECK(tensor_at(tm, 2, k, a, idx) == expect);
        int pos = n + 1;
        while (pos >= 0 && tuple[pos] == 1) tuple[pos--] = 0;
        if (pos < 0) break;
        ++tuple[pos];
      }
    }
  }
}

TEST_CASE("truncation at arity one keeps only the connection") {
  BracketSystem br = build_brackets(fixture_plain(), 1);
  CHECK(br.max_arity() == 1);
  CHECK(bracket_tensor(br, 1).size() == 1);
  CHECK_THROWS_AS(bracket_tensor(br, 2), IndexError);
  auto reports = check_homotopy_identities(br, 1);
  CHECK(reports[0].is_zero);
  CHECK_THROWS_AS(check_homotopy_identities(br, 2), IndexError);
}

TEST_CASE("torsion is rejected") {
  auto g = std::vector<std::vector<std::vector<Poly>>>(
      2, std::vector<std::vector<Poly>>(2, std::vector<Poly>(2, Poly(2))));
  g[0][0][1] = x(0);
  Connection c = Connection::from_raw(2, g);
  CHECK_FALSE(c.is_torsion_free());
  CHECK_THROWS_AS(build_brackets(c, 2), FormatError);
}

TEST_CASE("holography kernels") {
  Matrix w = standard_omega(2);

  BracketSystem flat = build_brackets(flat_connection(), 3);
  auto ks = holography_homotopy_term(flat, w, 3);
  REQUIRE(ks.size() == 1);
  CHECK(ks[0].arity == 0);
  CHECK(ks[0].weight == q(1, 2));
  CHECK(ks[0].tensor.at({0, 1}) == Poly::constant(2, Rational(1)));
  CHECK(ks[0].tensor.at({1, 0}) == Poly::constant(2, Rational(-1)));

  BracketSystem br = build_brackets(fixture_plain(), 3);
  auto kf = holography_homotopy_term(br, w, 3);
  REQUIRE(kf.size() == 4);
  CHECK(kf[1].arity == 1);
  CHECK(kf[1].weight == q(1, 2));
  CHECK(kf[2].arity == 2);
  CHECK(kf[2].weight == q(1, 6));
  CHECK(kf[3].arity == 3);
  CHECK(kf[3].weight == q(1, 24));
  // lowered arity-2 entries of the parallel fixture
  Connection cp = fixture_parallel();
  auto kp = holography_homotopy_term(build_brackets(cp, 2), *cp.omega(), 2);
  REQUIRE(kp.size() == 3);
  CHECK(kp[2].tensor.at({0, 0, 0, 1}) == Poly::constant(2, q(1, 6)));
  CHECK(kp[2].tensor.at({0, 1, 0, 0}) == Poly::constant(2, q(-1, 3)));

  // truncation zero keeps just the constant half-pairing
  auto k0 = holography_homotopy_term(br, w, 0);
  CHECK(k0.size() == 1);
}

TEST_CASE("form validation") {
  Matrix bad{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  BracketSystem br = build_brackets(fixture_plain(), 2);
  CHECK_THROWS_AS(check_pairing_invariance(br, bad, 2), FormatError);
  Matrix zero(2, std::vector<Rational>(2, Rational(0)));
  CHECK_THROWS_AS(check_pairing_invariance(br, zero, 2), FormatError);
  CHECK_THROWS_AS(holography_homotopy_term(br, zero, 1), FormatError);
  CHECK_THROWS_AS(Connection(2, {}, bad), FormatError);
  CHECK_THROWS_AS(Connection(2, {}, zero), FormatError);
}

TEST_CASE("connection serialization round trip") {
  Connection c = fixture_parallel();
  std::string text = connection_to_json(c);
  Connection back = connection_from_json(text);
  CHECK(back.dim() == 2);
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(back.gamma(k, a, b) == c.gamma(k, a, b));
  REQUIRE(back.omega().has_value());
  CHECK(*back.omega() == *c.omega());
  CHECK(connection_to_json(back) == text);

  CHECK_THROWS_AS(connection_from_json("{}"), FormatError);
  CHECK_THROWS_AS(connection_from_json("not json"), ParseError);
  CHECK_THROWS_AS(
      connection_from_json("{\"format\":\"connection/1\",\"dimension\":2,"
                           "\"christoffels\":[{\"k\":1,\"i\":2,\"j\":1,\"terms\":[]}]}"),
      FormatError);
}

TEST_CASE("bracket dump lists nonzero coefficients") {
  BracketSystem br = build_brackets(fixture_plain(), 3);
  auto j = nlohmann::ordered_json::parse(brackets_to_json(br));
  CHECK(j["format"] == "brackets/1");
  CHECK(j["dimension"] == 2);
  CHECK(j["max_arity"] == 3);
  REQUIRE(j["components"].size() == 5);
  const auto& first = j["components"][0];
  CHECK(first["arity"] == 1);
  CHECK(first["k"] == 1);
  CHECK(first["a"] == 1);
  CHECK(first["indices"] == nlohmann::ordered_json::array({1}));
}

TEST_CASE("curvature of the parallel fixture") {
  Connection c = fixture_parallel();
  CHECK(c.curvature(1, 0, 1, 0) == Poly::constant(2, Rational(1)));
  CHECK(c.curvature(1, 0, 0, 1) == Poly::constant(2, Rational(-1)));
  CHECK(c.curvature(0, 0, 0, 1).is_zero());
  Connection f = flat_connection();
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) CHECK(f.curvature(k, j, 0, 1).is_zero());
}
