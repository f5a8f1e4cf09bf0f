// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "lpecleave/data.hpp"
#include "lpecleave/error.hpp"

using namespace lpecleave;

namespace {
const Sort kNat = Sort::natural();
const Sort kBool = Sort::boolean();
} // namespace

TEST_SUITE("data") {
    TEST_CASE("enumerations reject empty and duplicate constructor lists") {
        CHECK_THROWS_AS(Sort::enumeration("E", {}), SortError);
        CHECK_THROWS_AS(Sort::enumeration("E", {"a", "a"}), SortError);
        const Sort e = Sort::enumeration("E", {"a", "b"});
        CHECK(e.constructor_index("b") == 1);
        CHECK_FALSE(e.constructor_index("c").has_value());
        CHECK(to_string(Value::constructor(1), e) == "b");
    }

    TEST_CASE("arithmetic and conditionals") {
        const Expr n = Expr::var("n", kNat);
        const Environment env{{"n", Value::natural(2)}};
        CHECK(evaluate(make_plus(n, Expr::natural(3)), env).as_nat() == 5);
        // subtraction floors at zero
        CHECK(evaluate(make_minus(n, Expr::natural(5)), env).as_nat() == 0);
        CHECK(evaluate(make_if(make_gt(n, Expr::natural(1)), Expr::natural(7), Expr::natural(9)), env).as_nat() == 7);
        CHECK(evaluate(make_implies(Expr::boolean(false), Expr::boolean(false)), env).as_bool());
        CHECK_FALSE(evaluate(make_le(n, Expr::natural(1)), env).as_bool());
    }

    TEST_CASE("sort errors and unbound variables") {
        CHECK_THROWS_AS(make_and(Expr::natural(1), Expr::boolean(true)), SortError);
        CHECK_THROWS_AS(make_eq(Expr::natural(1), Expr::boolean(true)), SortError);
        CHECK_THROWS_AS(make_if(Expr::boolean(true), Expr::natural(1), Expr::boolean(true)), SortError);
        CHECK_THROWS_AS(evaluate(Expr::var("x", kBool), Environment{}), UnboundVariable);
    }

    TEST_CASE("substitution and free variables") {
        const Expr n = Expr::var("n", kNat);
        const Expr s = Expr::var("s", kBool);
        const Expr e = make_and(make_eq(n, Expr::natural(0)), s);
        CHECK(free_vars(e).size() == 2);
        const Expr closed = substitute(e, {{"n", Expr::natural(0)}, {"s", Expr::boolean(true)}});
        CHECK(is_closed(closed));
        CHECK(evaluate(closed, {}).as_bool());
        CHECK(conjuncts(make_and(e, s)).size() == 3);
        CHECK(to_string(make_eq(n, Expr::natural(0))) == "n == 0");
    }

    TEST_CASE("bounded enumeration") {
        const auto nat = enumerate_sort(kNat, 3);
        CHECK(nat.values.size() == 4);
        CHECK(nat.truncated);
        CHECK_FALSE(enumerate_sort(kBool, 3).truncated);

        const std::vector<Variable> vars{{"b", kBool}, {"n", kNat}};
        std::vector<std::pair<bool, std::uint64_t>> seen;
        const bool truncated = for_each_assignment(vars, 1, [&](const Environment& env) {
            seen.emplace_back(env.find("b")->as_bool(), env.find("n")->as_nat());
        });
        CHECK(truncated);
        // the last variable varies fastest
        const std::vector<std::pair<bool, std::uint64_t>> expected{{false, 0}, {false, 1}, {true, 0}, {true, 1}};
        CHECK(seen == expected);
    }
}
