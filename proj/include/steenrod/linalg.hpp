#ifndef STEENROD_LINALG_HPP
#define STEENROD_LINALG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "steenrod/fp_arith.hpp"

namespace steenrod {

/// Dense row-major matrix over F_p. Entries are residues in [0, p).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    std::uint32_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// In-place reduced row echelon form; pivots are normalised to 1 and zero
/// rows are dropped. Returns the pivot column of each remaining row.
std::vector<std::size_t> row_reduce(Matrix& m, Prime p);

std::size_t rank(Matrix m, Prime p);

/// Some x with A x = b, or nullopt when b is outside the column span.
std::optional<std::vector<std::uint32_t>> solve(const Matrix& a, const std::vector<std::uint32_t>& b,
                                                Prime p);

/// Incrementally grown subspace of F_p^n kept in echelon form.
///
/// When `track` is set, every stored row also records which inserted
/// vectors it is a combination of, so membership queries can return a
/// witness combination.
class Span {
public:
    Span(std::size_t dimension, Prime p, bool track = false);

    /// Returns true if v was independent of the current span.
    bool insert(const std::vector<std::uint32_t>& v);

    bool contains(const std::vector<std::uint32_t>& v) const;

    /// Coefficients c with sum c_i * inserted_i = v, if v is in the span.
    /// Requires tracking.
    std::optional<std::vector<std::uint32_t>> express(const std::vector<std::uint32_t>& v) const;

    std::size_t rank() const { return rows_.size(); }
    std::size_t dimension() const { return n_; }
    std::size_t inserted() const { return inserted_; }

private:
    struct Row {
        std::size_t pivot;
        std::vector<std::uint32_t> v;
        std::vector<std::uint32_t> combo;
    };
    /// Reduces v (and its combo) against the stored rows in place.
    void reduce(std::vector<std::uint32_t>& v, std::vector<std::uint32_t>* combo) const;

    std::size_t n_;
    Prime p_;
    bool track_;
    std::size_t inserted_ = 0;
    std::vector<Row> rows_;
    std::vector<std::ptrdiff_t> row_of_pivot_;
};

} // namespace steenrod

#endif // STEENROD_LINALG_HPP
