#include "ablift/sparse.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace ablift::sparse {

std::size_t Matrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
}

Rational value_at(const Vector& v, Column c)
{
    auto it = std::lower_bound(v.begin(), v.end(), c, [](const Entry& e, Column x) { return e.col < x; });
    return it != v.end() && it->col == c ? it->value : Rational(0);
}

Vector multiply(const Matrix& a, const Vector& v)
{
    Vector out;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        Rational acc = 0;
        auto it = v.begin();
        for (const auto& e : a.rows[i]) {
            while (it != v.end() && it->col < e.col) ++it;
            if (it == v.end()) break;
            if (it->col == e.col) acc += e.value * it->value;
        }
        if (acc != 0) out.push_back({static_cast<Column>(i), acc});
    }
    return out;
}

namespace {

// row - factor * pivot, both sorted.
Vector axpy(const Vector& row, const Rational& factor, const Vector& pivot)
{
    Vector out;
    out.reserve(row.size() + pivot.size());
    auto a = row.begin();
    auto b = pivot.begin();
    while (a != row.end() || b != pivot.end()) {
        if (b == pivot.end() || (a != row.end() && a->col < b->col)) {
            out.push_back(*a++);
        } else if (a == row.end() || b->col < a->col) {
            out.push_back({b->col, -factor * b->value});
            ++b;
        } else {
            Rational v = a->value - factor * b->value;
            if (v != 0) out.push_back({a->col, std::move(v)});
            ++a;
            ++b;
        }
    }
    return out;
}

class Eliminator {
public:
    Eliminator(const Matrix& a, Backend backend) : rows_(a.rows), columns_(a.columns), backend_(backend)
    {
        col_rows_.resize(columns_);
        is_pivot_row_.assign(rows_.size(), false);
        for (std::uint32_t i = 0; i < rows_.size(); ++i) {
            for (const auto& e : rows_[i]) col_rows_[e.col].insert(i);
            if (!rows_[i].empty()) active_.insert({rows_[i].size(), i});
        }
    }

    Kernel run()
    {
        std::vector<std::pair<Column, std::uint32_t>> pivots;
        while (!active_.empty()) {
            const std::uint32_t p = active_.begin()->second;
            active_.erase(active_.begin());
            Column best = rows_[p].front().col;
            std::size_t best_count = col_rows_[best].size();
            for (const auto& e : rows_[p]) {
                const std::size_t n = col_rows_[e.col].size();
                if (n < best_count) {
                    best = e.col;
                    best_count = n;
                }
            }
            normalize(p, best);
            eliminate(p, best);
            is_pivot_row_[p] = true;
            pivots.emplace_back(best, p);
        }
        return extract(pivots);
    }

private:
    void normalize(std::uint32_t p, Column c)
    {
        Vector& row = rows_[p];
        const Rational inv = 1 / value_at(row, c);
        for (auto& e : row) e.value *= inv;
    }

    void eliminate(std::uint32_t p, Column c)
    {
        std::vector<std::uint32_t> targets;
        for (std::uint32_t r : col_rows_[c]) {
            if (r != p) targets.push_back(r);
        }
        std::sort(targets.begin(), targets.end());
        const Vector& pivot = rows_[p];
        std::vector<Vector> updated(targets.size());
        const auto work = [&](std::size_t t) {
            const Vector& row = rows_[targets[t]];
            updated[t] = axpy(row, value_at(row, c), pivot);
        };
        if (backend_ == Backend::parallel && targets.size() > 8) {
#pragma omp parallel for schedule(dynamic, 4)
            for (std::size_t t = 0; t < targets.size(); ++t) work(t);
        } else {
            for (std::size_t t = 0; t < targets.size(); ++t) work(t);
        }
        for (std::size_t t = 0; t < targets.size(); ++t) replace(targets[t], std::move(updated[t]));
    }

    void replace(std::uint32_t r, Vector next)
    {
        Vector& old = rows_[r];
        const bool was_active = !is_pivot_row_[r];
        if (was_active) active_.erase({old.size(), r});
        auto a = old.begin();
        auto b = next.begin();
        while (a != old.end() || b != next.end()) {
            if (b == next.end() || (a != old.end() && a->col < b->col)) {
                col_rows_[a->col].erase(r);
                ++a;
            } else if (a == old.end() || b->col < a->col) {
                col_rows_[b->col].insert(r);
                ++b;
            } else {
                ++a;
                ++b;
            }
        }
        old = std::move(next);
        if (was_active && !old.empty()) active_.insert({old.size(), r});
    }

    Kernel extract(std::vector<std::pair<Column, std::uint32_t>>& pivots)
    {
        Kernel k;
        k.rank = pivots.size();
        std::sort(pivots.begin(), pivots.end());
        std::vector<bool> is_pivot(columns_, false);
        for (auto [c, r] : pivots) {
            is_pivot[c] = true;
            k.pivot_columns.push_back(c);
        }
        std::vector<Column> pivot_of_row(rows_.size(), 0);
        for (auto [c, r] : pivots) pivot_of_row[r] = c;
        for (Column f = 0; f < columns_; ++f) {
            if (is_pivot[f]) continue;
            k.free_columns.push_back(f);
            Vector v;
            // Every row still holding f is a pivot row after Gauss-Jordan.
            std::vector<std::pair<Column, Rational>> parts;
            for (std::uint32_t r : col_rows_[f]) {
                parts.emplace_back(pivot_of_row[r], -value_at(rows_[r], f));
            }
            parts.emplace_back(f, Rational(1));
            std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [c, val] : parts) v.push_back({c, std::move(val)});
            k.basis.push_back(std::move(v));
        }
        return k;
    }

    std::vector<Vector> rows_;
    std::size_t columns_;
    Backend backend_;
    std::vector<std::unordered_set<std::uint32_t>> col_rows_;
    std::set<std::pair<std::size_t, std::uint32_t>> active_;
    std::vector<bool> is_pivot_row_;
};

}  // namespace

Kernel kernel(const Matrix& a, Backend backend)
{
    for (const auto& row : a.rows) {
        for (const auto& e : row) {
            if (e.col >= a.columns) throw std::out_of_range("sparse matrix entry outside the column range");
        }
    }
    return Eliminator(a, backend).run();
}

}  // namespace ablift::sparse
