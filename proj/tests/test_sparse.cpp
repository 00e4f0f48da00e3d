#include "ablift/sparse.hpp"

#include "doctest.h"

#include <omp.h>

#include <map>
#include <random>

using namespace ablift;
using namespace ablift::sparse;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, double density)
{
    Matrix a;
    a.columns = cols;
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(-4, 4);
    for (std::size_t i = 0; i < rows; ++i) {
        Vector row;
        for (Column c = 0; c < cols; ++c) {
            if (coin(rng) < density) {
                const int v = val(rng);
                if (v != 0) row.push_back({c, Rational(v) / static_cast<int>(1 + rng() % 3)});
            }
        }
        a.rows.push_back(std::move(row));
    }
    // Duplicate combinations so that rank deficiency is common.
    if (rows >= 3) {
        Vector combo;
        std::map<Column, Rational> acc;
        for (const auto& e : a.rows[0]) acc[e.col] += 2 * e.value;
        for (const auto& e : a.rows[1]) acc[e.col] -= e.value;
        for (auto& [c, v] : acc) {
            if (v != 0) combo.push_back({c, v});
        }
        a.rows.push_back(std::move(combo));
    }
    return a;
}

// Dense row reduction over the rationals.
std::size_t dense_rank(const Matrix& a)
{
    std::vector<std::vector<Rational>> m(a.rows.size(), std::vector<Rational>(a.columns, 0));
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        for (const auto& e : a.rows[i]) m[i][e.col] = e.value;
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.columns && rank < m.size(); ++c) {
        std::size_t p = rank;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == rank || m[i][c] == 0) continue;
            const Rational f = m[i][c] / m[rank][c];
            for (std::size_t k = c; k < a.columns; ++k) m[i][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

bool same(const Kernel& a, const Kernel& b)
{
    if (a.rank != b.rank || a.free_columns != b.free_columns || a.basis.size() != b.basis.size()) return false;
    for (std::size_t k = 0; k < a.basis.size(); ++k) {
        if (a.basis[k].size() != b.basis[k].size()) return false;
        for (std::size_t t = 0; t < a.basis[k].size(); ++t) {
            if (a.basis[k][t].col != b.basis[k][t].col || a.basis[k][t].value != b.basis[k][t].value) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("zero matrix")
{
    Matrix a;
    a.columns = 7;
    a.rows.resize(3);
    const Kernel k = kernel(a);
    CHECK(k.rank == 0);
    CHECK(k.basis.size() == 7);
    for (Column c = 0; c < 7; ++c) {
        REQUIRE(k.basis[c].size() == 1);
        CHECK(k.basis[c][0].col == c);
        CHECK(k.basis[c][0].value == 1);
    }
}

TEST_CASE("small exact kernel")
{
    // x0 + x1 = 0, x1 - 2 x2 = 0
    Matrix a;
    a.columns = 3;
    a.rows = {{{0, Rational(1)}, {1, Rational(1)}}, {{1, Rational(1)}, {2, Rational(-2)}}};
    const Kernel k = kernel(a);
    CHECK(k.rank == 2);
    REQUIRE(k.basis.size() == 1);
    CHECK(multiply(a, k.basis[0]).empty());
    const Rational x2 = value_at(k.basis[0], 2);
    CHECK(value_at(k.basis[0], 0) == -2 * x2);
}

TEST_CASE("random matrices: exactness, rank and backend agreement")
{
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 12;
        const std::size_t cols = 1 + rng() % 14;
        const Matrix a = random_matrix(rng, rows, cols, 0.1 + 0.05 * (trial % 8));
        const Kernel ser = kernel(a, Backend::serial);
        const Kernel par = kernel(a, Backend::parallel);
        CHECK(same(ser, par));
        CHECK(ser.rank == dense_rank(a));
        CHECK(ser.rank + ser.basis.size() == a.columns);
        for (std::size_t k = 0; k < ser.basis.size(); ++k) {
            CHECK(multiply(a, ser.basis[k]).empty());
            CHECK(value_at(ser.basis[k], ser.free_columns[k]) == 1);
        }
    }
}

TEST_CASE("larger sparse matrices are independent of the thread count")
{
    std::mt19937 rng(99);
    const Matrix a = random_matrix(rng, 150, 180, 0.03);
    const Kernel ref = kernel(a, Backend::serial);
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        CHECK(same(kernel(a, Backend::parallel), ref));
    }
    CHECK(ref.rank == dense_rank(a));
    for (const auto& v : ref.basis) CHECK(multiply(a, v).empty());
}

TEST_CASE("out of range entry")
{
    Matrix a;
    a.columns = 2;
    a.rows = {{{3, Rational(1)}}};
    CHECK_THROWS_AS(kernel(a), std::out_of_range);
}
