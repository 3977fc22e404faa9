#ifndef ELLFM_LABELS_HPP
#define ELLFM_LABELS_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ellfm/errors.hpp"

namespace ellfm
{

/// Strictly increasing 1-based positions.
using IndexSet = std::vector<int>;

namespace detail
{

inline bool strictly_increasing(const IndexSet &s)
{
    return std::adjacent_find(s.begin(), s.end(), [](int a, int b) { return a >= b; }) == s.end();
}

inline bool contains(const IndexSet &s, int x)
{
    return std::binary_search(s.begin(), s.end(), x);
}

inline std::string describe(const IndexSet &s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + "}";
}

} // namespace detail

/// All k-subsets of `pool` (taken in order), lexicographic.
inline std::vector<IndexSet> combinations(const IndexSet &pool, int k)
{
    std::vector<IndexSet> out;
    const int n = static_cast<int>(pool.size());
    if (k < 0 || k > n) {
        return out;
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        idx[static_cast<std::size_t>(i)] = i;
    }
    while (true) {
        IndexSet pick;
        pick.reserve(idx.size());
        for (int i : idx) {
            pick.push_back(pool[static_cast<std::size_t>(i)]);
        }
        out.push_back(std::move(pick));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

inline IndexSet iota_set(int first, int last)
{
    IndexSet s;
    for (int i = first; i <= last; ++i) {
        s.push_back(i);
    }
    return s;
}

/// Boundary data of the rank-2 partition function W_{L,k}.
struct BaseLabel
{
    int L = 0;
    IndexSet positions;

    BaseLabel() = default;
    BaseLabel(int length, IndexSet pos) : L(length), positions(std::move(pos))
    {
        if (L < 0) {
            throw label_error("base label: negative L");
        }
        if (!detail::strictly_increasing(positions)) {
            throw label_error("base label: positions not strictly increasing");
        }
        if (!positions.empty() && (positions.front() < 1 || positions.back() > L)) {
            throw label_error("base label: position outside 1..L");
        }
    }

    int k() const noexcept { return static_cast<int>(positions.size()); }

    /// i^(1): color 1 at the positions, 2 elsewhere.
    std::vector<int> colors() const
    {
        std::vector<int> c(static_cast<std::size_t>(L), 2);
        for (int p : positions) {
            c[static_cast<std::size_t>(p - 1)] = 1;
        }
        return c;
    }

    bool operator==(const BaseLabel &) const = default;
};

inline std::vector<BaseLabel> enumerate_base_labels(int L, int k)
{
    std::vector<BaseLabel> out;
    for (auto &s : combinations(iota_set(1, L), k)) {
        out.emplace_back(L, std::move(s));
    }
    return out;
}

/// Nested index sets {I1, I2} of size {k1, k2, L1, L2}; Î2 and Î3 are derived.
class FMLabel
{
public:
    FMLabel() = default;

    FMLabel(int k1, int k2, int L1, int L2, IndexSet I1, IndexSet I2)
        : m_k1(k1), m_k2(k2), m_L1(L1), m_L2(L2), m_I1(std::move(I1)), m_I2(std::move(I2))
    {
        if (k1 < 0 || k2 < 0 || L1 < 0 || L2 < 0) {
            throw label_error("FM label: negative size");
        }
        if (static_cast<int>(m_I1.size()) != k1 || static_cast<int>(m_I2.size()) != k2) {
            throw label_error("FM label: set sizes do not match k1, k2");
        }
        if (!detail::strictly_increasing(m_I1) || !detail::strictly_increasing(m_I2)) {
            throw label_error("FM label: index sets must be strictly increasing");
        }
        if (!m_I2.empty() && (m_I2.front() < 1 || m_I2.back() > L2)) {
            throw label_error("FM label: I2 " + detail::describe(m_I2) + " not inside 1..L2");
        }
        const IndexSet hat = I2hat();
        for (int x : m_I1) {
            if (!detail::contains(hat, x)) {
                throw label_error("FM label: I1 " + detail::describe(m_I1) + " not inside I2-hat " +
                                  detail::describe(hat));
            }
        }
    }

    int k1() const noexcept { return m_k1; }
    int k2() const noexcept { return m_k2; }
    int L1() const noexcept { return m_L1; }
    int L2() const noexcept { return m_L2; }
    const IndexSet &I1() const noexcept { return m_I1; }
    const IndexSet &I2() const noexcept { return m_I2; }

    /// I2 together with {L2+1, ..., L2+L1}.
    IndexSet I2hat() const
    {
        IndexSet s = m_I2;
        for (int p = m_L2 + 1; p <= m_L2 + m_L1; ++p) {
            s.push_back(p);
        }
        return s;
    }

    IndexSet I3hat() const { return iota_set(1, m_L2); }

    /// i^(2) in {1,2,3}^L2.
    std::vector<int> colors2() const
    {
        std::vector<int> c(static_cast<std::size_t>(m_L2), 3);
        for (int p : m_I2) {
            c[static_cast<std::size_t>(p - 1)] = detail::contains(m_I1, p) ? 1 : 2;
        }
        return c;
    }

    /// i^(1) in {1,2}^L1, read off positions L2+1..L2+L1.
    std::vector<int> colors1() const
    {
        std::vector<int> c;
        for (int p = m_L2 + 1; p <= m_L2 + m_L1; ++p) {
            c.push_back(detail::contains(m_I1, p) ? 1 : 2);
        }
        return c;
    }

    bool operator==(const FMLabel &) const = default;

private:
    int m_k1 = 0;
    int m_k2 = 0;
    int m_L1 = 0;
    int m_L2 = 0;
    IndexSet m_I1;
    IndexSet m_I2;
};

/// Rebuilds the set form from the color strings i^(2) and i^(1).
inline FMLabel label_from_colors(std::span<const int> colors2, std::span<const int> colors1)
{
    const int L2 = static_cast<int>(colors2.size());
    const int L1 = static_cast<int>(colors1.size());
    IndexSet I1;
    IndexSet I2;
    for (int p = 1; p <= L2; ++p) {
        const int c = colors2[static_cast<std::size_t>(p - 1)];
        if (c < 1 || c > 3) {
            throw domain_error("label_from_colors: color outside {1,2,3}");
        }
        if (c != 3) {
            I2.push_back(p);
        }
        if (c == 1) {
            I1.push_back(p);
        }
    }
    for (int p = 1; p <= L1; ++p) {
        const int c = colors1[static_cast<std::size_t>(p - 1)];
        if (c < 1 || c > 2) {
            throw domain_error("label_from_colors: lower color outside {1,2}");
        }
        if (c == 1) {
            I1.push_back(L2 + p);
        }
    }
    const int k1 = static_cast<int>(I1.size());
    const int k2 = static_cast<int>(I2.size());
    return FMLabel(k1, k2, L1, L2, std::move(I1), std::move(I2));
}

/// Position of each member of I1 inside the increasing enumeration of Î2.
inline IndexSet induced_set(const FMLabel &label)
{
    const IndexSet hat = label.I2hat();
    IndexSet out;
    for (int x : label.I1()) {
        const auto it = std::lower_bound(hat.begin(), hat.end(), x);
        if (it == hat.end() || *it != x) {
            throw label_error("induced_set: I1 not inside I2-hat");
        }
        out.push_back(static_cast<int>(it - hat.begin()) + 1);
    }
    return out;
}

/// c(k, j): number of l in 1..k with i^(2)_l = j.
inline int color_count(const FMLabel &label, int k, int j)
{
    if (k < 0 || k > label.L2()) {
        throw domain_error("color_count: k outside 0..L2");
    }
    if (j < 1 || j > 3) {
        throw domain_error("color_count: color outside {1,2,3}");
    }
    const auto c = label.colors2();
    return static_cast<int>(std::count(c.begin(), c.begin() + k, j));
}

/// m_i: z2[i] for i <= k2, else w1[i - k2].
template <typename T>
T merged_spectral(const FMLabel &label, std::span<const T> z2, std::span<const T> w1, int i)
{
    if (static_cast<int>(z2.size()) != label.k2() || static_cast<int>(w1.size()) != label.L1()) {
        throw domain_error("merged_spectral: spectral lengths do not match label");
    }
    if (i < 1 || i > label.k2() + label.L1()) {
        throw domain_error("merged_spectral: index outside 1..k2+L1");
    }
    return i <= label.k2() ? z2[static_cast<std::size_t>(i - 1)] : w1[static_cast<std::size_t>(i - 1 - label.k2())];
}

/// Label of the smaller instance after w2_{L2} = z2_{k2} - gamma; requires L2 in I2.
inline FMLabel j_transform(const FMLabel &label)
{
    if (label.L2() == 0 || label.I2().empty() || label.I2().back() != label.L2()) {
        throw precondition_error("j_transform: color of the last upper column is 3");
    }
    IndexSet J2(label.I2().begin(), label.I2().end() - 1);
    return FMLabel(label.k1(), label.k2() - 1, label.L1() + 1, label.L2() - 1, label.I1(), std::move(J2));
}

/// Label after peeling a color-3 last upper column; requires L2 not in I2.
inline FMLabel k_transform(const FMLabel &label)
{
    if (label.L2() == 0 || (!label.I2().empty() && label.I2().back() == label.L2())) {
        throw precondition_error("k_transform: last upper column is not color 3");
    }
    IndexSet K1;
    for (int x : label.I1()) {
        K1.push_back(x > label.L2() ? x - 1 : x);
    }
    return FMLabel(label.k1(), label.k2(), label.L1(), label.L2() - 1, std::move(K1), label.I2());
}

/// All labels of the given size, ordered by (I2, I1).
inline std::vector<FMLabel> enumerate_labels(int k1, int k2, int L1, int L2)
{
    std::vector<FMLabel> out;
    if (k1 < 0 || k2 < 0 || L1 < 0 || L2 < 0 || k2 > L2 || k1 > k2 + L1) {
        return out;
    }
    for (auto &I2 : combinations(iota_set(1, L2), k2)) {
        IndexSet hat = I2;
        for (int p = L2 + 1; p <= L2 + L1; ++p) {
            hat.push_back(p);
        }
        for (auto &I1 : combinations(hat, k1)) {
            out.emplace_back(k1, k2, L1, L2, std::move(I1), I2);
        }
    }
    return out;
}

} // namespace ellfm

#endif
