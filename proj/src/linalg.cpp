#include "steenrod/linalg.hpp"

#include <stdexcept>

namespace steenrod {

std::vector<std::size_t> row_reduce(Matrix& m, Prime p)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t sel = r;
        while (sel < m.rows && m.at(sel, c) == 0)
            ++sel;
        if (sel == m.rows)
            continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m.at(sel, j), m.at(r, j));
        std::uint32_t inv = p.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols; ++j)
            m.at(r, j) = p.mul(m.at(r, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0)
                continue;
            std::uint32_t f = p.neg(m.at(i, c));
            for (std::size_t j = c; j < m.cols; ++j)
                if (m.at(r, j))
                    m.at(i, j) = p.add(m.at(i, j), p.mul(f, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    m.rows = r;
    m.data.resize(r * m.cols);
    return pivots;
}

std::size_t rank(Matrix m, Prime p) { return row_reduce(m, p).size(); }

std::optional<std::vector<std::uint32_t>> solve(const Matrix& a, const std::vector<std::uint32_t>& b,
                                                Prime p)
{
    if (b.size() != a.rows)
        throw std::invalid_argument("solve: right-hand side has wrong length");
    // augmented [A | b], then read x off the pivots
    Matrix aug(a.rows, a.cols + 1);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j)
            aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[i];
    }
    auto pivots = row_reduce(aug, p);
    std::vector<std::uint32_t> x(a.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == a.cols)
            return std::nullopt;
        x[pivots[r]] = aug.at(r, a.cols);
    }
    return x;
}

Span::Span(std::size_t dimension, Prime p, bool track)
    : n_(dimension), p_(p), track_(track), row_of_pivot_(dimension, -1)
{
}

void Span::reduce(std::vector<std::uint32_t>& v, std::vector<std::uint32_t>* combo) const
{
    for (std::size_t c = 0; c < n_; ++c) {
        if (v[c] == 0 || row_of_pivot_[c] < 0)
            continue;
        const Row& row = rows_[static_cast<std::size_t>(row_of_pivot_[c])];
        std::uint32_t f = p_.neg(v[c]);
        for (std::size_t j = c; j < n_; ++j)
            if (row.v[j])
                v[j] = p_.add(v[j], p_.mul(f, row.v[j]));
        if (combo)
            for (std::size_t j = 0; j < row.combo.size(); ++j)
                if (row.combo[j])
                    (*combo)[j] = p_.add((*combo)[j], p_.mul(f, row.combo[j]));
    }
}

bool Span::insert(const std::vector<std::uint32_t>& v)
{
    if (v.size() != n_)
        throw std::invalid_argument("Span::insert: vector has wrong dimension");
    std::vector<std::uint32_t> w = v;
    std::vector<std::uint32_t> combo;
    std::size_t index = inserted_++;
    if (track_) {
        combo.assign(inserted_, 0);
        combo[index] = 1;
        for (Row& r : rows_)
            r.combo.resize(inserted_, 0);
    }
    reduce(w, track_ ? &combo : nullptr);
    std::size_t pivot = 0;
    while (pivot < n_ && w[pivot] == 0)
        ++pivot;
    if (pivot == n_)
        return false;
    std::uint32_t inv = p_.inv(w[pivot]);
    for (auto& x : w)
        x = p_.mul(x, inv);
    for (auto& x : combo)
        x = p_.mul(x, inv);
    row_of_pivot_[pivot] = static_cast<std::ptrdiff_t>(rows_.size());
    rows_.push_back({pivot, std::move(w), std::move(combo)});
    return true;
}

bool Span::contains(const std::vector<std::uint32_t>& v) const
{
    std::vector<std::uint32_t> w = v;
    reduce(w, nullptr);
    for (auto x : w)
        if (x)
            return false;
    return true;
}

std::optional<std::vector<std::uint32_t>> Span::express(const std::vector<std::uint32_t>& v) const
{
    if (!track_)
        throw std::logic_error("Span::express requires a tracking span");
    std::vector<std::uint32_t> w = v;
    std::vector<std::uint32_t> combo(inserted_, 0);
    reduce(w, &combo);
    for (auto x : w)
        if (x)
            return std::nullopt;
    // v - sum(f_i row_i) = 0 accumulated into combo with negated factors
    for (auto& x : combo)
        x = p_.neg(x);
    return combo;
}

} // namespace steenrod
