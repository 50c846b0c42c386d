#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "llsk/bigint.hpp"
#include "llsk/errors.hpp"

// Exact Schubert calculus in the cohomology of G(r+1, d+1): partitions in
// the (r+1) x (d-r) box, Pieri and Littlewood-Richardson products, and
// intersection numbers. Classes vanishing outside the box are dropped,
// mirroring the finite Grassmannian ring.

namespace llsk {

class Partition {
public:
    // The empty partition in a rows x cols box.
    Partition(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw input_error("invariant", "", "negative box dimensions");
    }

    Partition(int rows, int cols, std::vector<int> parts) : Partition(rows, cols) {
        while (!parts.empty() && parts.back() == 0) parts.pop_back();
        if (static_cast<int>(parts.size()) > rows)
            throw input_error("invariant", "", "partition has more than " + std::to_string(rows) +
                                                   " parts");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] < 0) throw input_error("invariant", "", "negative part");
            if (parts[i] > cols)
                throw input_error("invariant", "",
                                  "part exceeds box width " + std::to_string(cols));
            if (i > 0 && parts[i] > parts[i - 1])
                throw input_error("invariant", "", "parts not weakly decreasing");
        }
        parts_ = std::move(parts);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::vector<int>& parts() const { return parts_; }
    int part(int i) const { return i < static_cast<int>(parts_.size()) ? parts_[i] : 0; }
    int length() const { return static_cast<int>(parts_.size()); }

    int size() const {
        int s = 0;
        for (int p : parts_) s += p;
        return s;
    }

    bool empty() const { return parts_.empty(); }
    bool is_full_box() const { return size() == rows_ * cols_; }

    // Box complement, reversed: an involution with |mu| + |lambda| = rows*cols.
    Partition complement() const {
        std::vector<int> comp;
        for (int j = 0; j < rows_; ++j) comp.push_back(cols_ - part(rows_ - 1 - j));
        return Partition(rows_, cols_, std::move(comp));
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) os << ',';
            os << parts_[i];
        }
        return os.str();
    }

    bool operator==(const Partition& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && parts_ == o.parts_;
    }
    bool operator<(const Partition& o) const {
        return std::tie(rows_, cols_, parts_) < std::tie(o.rows_, o.cols_, o.parts_);
    }

private:
    int rows_, cols_;
    std::vector<int> parts_;
};

// Every partition in the box, in lexicographic order of the part vectors.
inline std::vector<Partition> all_partitions_in_box(int rows, int cols) {
    std::vector<Partition> out;
    std::vector<int> stack;
    out.emplace_back(rows, cols, stack);
    auto gen = [&](auto&& self, int row, int max_part) -> void {
        if (row == rows) return;
        for (int p = 1; p <= max_part; ++p) {
            stack.push_back(p);
            out.emplace_back(rows, cols, stack);
            self(self, row + 1, p);
            stack.pop_back();
        }
    };
    gen(gen, 0, cols);
    std::sort(out.begin(), out.end(),
              [](const Partition& a, const Partition& b) { return a.parts() < b.parts(); });
    return out;
}

// Formal nonnegative-integer combination of Schubert classes in one box.
class ClassCombination {
public:
    ClassCombination(int rows, int cols) : rows_(rows), cols_(cols) {}

    static ClassCombination unit(int rows, int cols) {
        ClassCombination c(rows, cols);
        c.add(Partition(rows, cols), 1);
        return c;
    }

    static ClassCombination single(const Partition& p, BigInt coeff = 1) {
        ClassCombination c(p.rows(), p.cols());
        c.add(p, std::move(coeff));
        return c;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void add(const Partition& p, const BigInt& coeff) {
        if (p.rows() != rows_ || p.cols() != cols_)
            throw input_error("invariant", "", "partition from a different box");
        if (coeff == 0) return;
        auto it = coeffs_.find(p.parts());
        if (it == coeffs_.end()) {
            coeffs_.emplace(p.parts(), coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    BigInt coefficient(const Partition& p) const {
        auto it = coeffs_.find(p.parts());
        return it == coeffs_.end() ? BigInt(0) : it->second;
    }

    bool zero() const { return coeffs_.empty(); }

    // (parts, coefficient) pairs in lexicographic order of parts.
    std::vector<std::pair<Partition, BigInt>> terms() const {
        std::vector<std::pair<Partition, BigInt>> out;
        for (const auto& [parts, c] : coeffs_)
            out.emplace_back(Partition(rows_, cols_, parts), c);
        return out;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [parts, c] : coeffs_) {
            if (!first) os << " + ";
            first = false;
            os << c.str() << "*s[" << Partition(rows_, cols_, parts).to_string() << "]";
        }
        return os.str();
    }

    bool operator==(const ClassCombination& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && coeffs_ == o.coeffs_;
    }

private:
    int rows_, cols_;
    std::map<std::vector<int>, BigInt> coeffs_;
};

namespace detail {

// Partitions obtained from `from` by adding exactly k boxes, no two in a
// column (the Pieri condition), staying inside the box.
inline void horizontal_strip_additions(const Partition& from, int k,
                                       std::vector<Partition>& out) {
    const int rows = from.rows(), cols = from.cols();
    std::vector<int> next(rows, 0);
    auto rec = [&](auto&& self, int row, int remaining) -> void {
        if (row == rows) {
            if (remaining == 0) {
                std::vector<int> parts(next.begin(), next.end());
                out.emplace_back(rows, cols, parts);
            }
            return;
        }
        const int lo = from.part(row);
        // At most one new box per column: row may not grow past the
        // previous row's old length. Partition shape: nor past the
        // previous row's new length.
        int hi = row == 0 ? cols : std::min(from.part(row - 1), next[row - 1]);
        for (int v = lo; v <= hi && v - lo <= remaining; ++v) {
            next[row] = v;
            self(self, row + 1, remaining - (v - lo));
        }
        next[row] = 0;
    };
    rec(rec, 0, k);
}

} // namespace detail

// Multiply by the special class sigma_k.
inline ClassCombination pieri_product(const ClassCombination& c, int k) {
    if (k < 1 || k > c.cols()) throw input_error("input", "", "pieri index out of range");
    ClassCombination out(c.rows(), c.cols());
    for (const auto& [p, coeff] : c.terms()) {
        std::vector<Partition> grown;
        detail::horizontal_strip_additions(p, k, grown);
        for (const auto& q : grown) out.add(q, coeff);
    }
    return out;
}

// Littlewood-Richardson coefficient c^nu_{lambda,mu}: the number of
// column-strict skew fillings of nu/lambda with content mu whose reverse
// reading word is a lattice word. Counted by direct backtracking over the
// cells in reading order (right to left along each row, top to bottom).
inline BigInt lr_coefficient(const Partition& lambda, const Partition& mu, const Partition& nu) {
    if (nu.size() != lambda.size() + mu.size()) return 0;
    for (int i = 0; i < nu.rows(); ++i)
        if (nu.part(i) < lambda.part(i)) return 0;
    const int m = std::max(mu.length(), 1);
    std::vector<std::pair<int, int>> cells; // reading order
    for (int i = 0; i < nu.rows(); ++i)
        for (int j = nu.part(i) - 1; j >= lambda.part(i); --j) cells.emplace_back(i, j);
    if (cells.empty()) return mu.size() == 0 ? 1 : 0;

    std::vector<std::vector<int>> fill(nu.rows(), std::vector<int>(nu.cols(), 0));
    std::vector<int> count(m + 2, 0);
    BigInt total = 0;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == cells.size()) {
            total += 1;
            return;
        }
        auto [i, j] = cells[idx];
        int above = 0; // cell above is either in lambda (no constraint) or already filled
        if (i > 0 && j >= lambda.part(i - 1)) above = fill[i - 1][j];
        int right_bound = j + 1 < nu.part(i) ? fill[i][j + 1] : m;
        for (int v = 1; v <= right_bound; ++v) {
            if (count[v] >= mu.part(v - 1)) continue;      // content
            if (v >= 2 && count[v] + 1 > count[v - 1]) continue; // lattice word
            if (v <= above) continue;                      // column strict
            fill[i][j] = v;
            ++count[v];
            self(self, idx + 1);
            --count[v];
            fill[i][j] = 0;
        }
    };
    rec(rec, 0);
    return total;
}

// s_lambda * s_mu truncated to the box.
inline ClassCombination lr_product(const Partition& lambda, const Partition& mu) {
    if (lambda.rows() != mu.rows() || lambda.cols() != mu.cols())
        throw input_error("invariant", "", "partitions from different boxes");
    ClassCombination out(lambda.rows(), lambda.cols());
    if (lambda.empty()) {
        out.add(mu, 1);
        return out;
    }
    if (mu.empty()) {
        out.add(lambda, 1);
        return out;
    }
    const int target = lambda.size() + mu.size();
    if (target > lambda.rows() * lambda.cols()) return out; // vanishes above the box
    for (const auto& nu : all_partitions_in_box(lambda.rows(), lambda.cols())) {
        if (nu.size() != target) continue;
        BigInt c = lr_coefficient(lambda, mu, nu);
        if (c != 0) out.add(nu, c);
    }
    return out;
}

inline ClassCombination multiply(const ClassCombination& c, const Partition& p) {
    // Single-row conditions go through the Pieri rule; general ones
    // through the LR rule. The two paths cross-check each other.
    if (p.empty()) return c;
    if (p.length() == 1) return pieri_product(c, p.part(0));
    ClassCombination out(c.rows(), c.cols());
    for (const auto& [q, coeff] : c.terms()) {
        ClassCombination prod = lr_product(q, p);
        for (const auto& [nu, lrc] : prod.terms()) out.add(nu, coeff * lrc);
    }
    return out;
}

// Coefficient of the full-box class in the product of the conditions:
// the number of points of the zero-dimensional Schubert intersection,
// or 0 when the codimensions do not fill the box.
inline BigInt intersection_number(const std::vector<Partition>& conditions, int r, int d) {
    if (r < 0 || d < r) throw input_error("input", "", "need 0 <= r <= d");
    const int rows = r + 1, cols = d - r;
    int total = 0;
    for (const auto& p : conditions) {
        if (p.rows() != rows || p.cols() != cols)
            throw input_error("invariant", "", "condition from a different box");
        total += p.size();
    }
    if (total != rows * cols) return 0;
    ClassCombination acc = ClassCombination::unit(rows, cols);
    for (const auto& p : conditions) {
        acc = multiply(acc, p);
        if (acc.zero()) return 0;
    }
    Partition full(rows, cols, std::vector<int>(rows, cols));
    return acc.coefficient(full);
}

// Brill-Noether number rho = g - (r+1)(g - d + r).
inline long long brill_noether_rho(long long g, long long r, long long d) {
    if (g < 0 || r < 0 || r > d) throw input_error("input", "", "need g >= 0 and 0 <= r <= d");
    return g - (r + 1) * (g - d + r);
}

// Standard Young tableaux of the rows x cols rectangle, by the hook
// length formula. Independent oracle for sigma_1-power intersections.
inline BigInt syt_rectangle_count(int rows, int cols) {
    if (rows < 1 || cols < 1) throw input_error("input", "", "rectangle sides must be >= 1");
    BigInt num = factorial(static_cast<long long>(rows) * cols);
    BigInt hooks = 1;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) hooks *= (rows - 1 - i) + (cols - 1 - j) + 1;
    return num / hooks;
}

} // namespace llsk
