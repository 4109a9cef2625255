#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agemap {

/// Publication-year sanity window. Years outside are treated as unparseable.
inline constexpr int kYearMin = 1500;
inline constexpr int kYearMax = 2100;

/// A cited work under a canonical string identity. Two keys are the same
/// reference iff their canonical strings are equal.
struct ReferenceKey {
    std::string canonical;          // uppercase, single-spaced, DOI stripped
    std::optional<int> pub_year;    // parsed from the citation string
    std::string raw;                // original payload as it appeared

    friend bool operator==(const ReferenceKey& a, const ReferenceKey& b) {
        return a.canonical == b.canonical;
    }
    friend bool operator<(const ReferenceKey& a, const ReferenceKey& b) {
        return a.canonical < b.canonical;
    }
};

/// A source publication.
struct Document {
    std::string doc_id;
    int pub_year = 0;
    std::string title;
    std::string source;
    std::vector<ReferenceKey> references;  // no duplicate canonicals
};

/// Dense symmetric matrix; only the upper triangle (incl. diagonal) is
/// stored, (i,j) and (j,i) read the same cell.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n, double fill = 0.0)
        : n_(n), cells_(n * (n + 1) / 2, fill) {}

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return cells_[index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return cells_[index(i, j)]; }

    friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
        return a.n_ == b.n_ && a.cells_ == b.cells_;
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

    std::size_t n_ = 0;
    std::vector<double> cells_;
};

} // namespace agemap
