#ifndef ABLIFT_SPARSE_HPP
#define ABLIFT_SPARSE_HPP

#include "ablift/rational.hpp"

#include <cstdint>
#include <vector>

namespace ablift::sparse {

using Column = std::uint32_t;

struct Entry {
    Column col;
    Rational value;
};

/// Sorted by column, no explicit zeros.
using Vector = std::vector<Entry>;

struct Matrix {
    std::size_t columns = 0;
    std::vector<Vector> rows;

    std::size_t nonzeros() const;
};

enum class Backend { serial, parallel };

struct Kernel {
    std::size_t rank = 0;
    std::vector<Column> pivot_columns;  // ascending
    std::vector<Column> free_columns;   // ascending; basis[k] has a 1 at free_columns[k]
    std::vector<Vector> basis;
};

/// Exact Gauss-Jordan with Markowitz-style pivots: shortest active row first,
/// then the column of that row with the fewest entries; ties go to the lower
/// index. The parallel backend updates the rows hit by a pivot concurrently
/// and returns the same basis as the serial one.
Kernel kernel(const Matrix& a, Backend backend = Backend::parallel);

/// a * v, as a sparse vector over the rows.
Vector multiply(const Matrix& a, const Vector& v);

Rational value_at(const Vector& v, Column c);

}  // namespace ablift::sparse

#endif  // ABLIFT_SPARSE_HPP
