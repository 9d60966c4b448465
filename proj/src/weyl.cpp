#include "fanostab/weyl.hpp"

#include <algorithm>
#include <stdexcept>

namespace fano::weyl {

namespace {

bool weakly_decreasing(const Weight& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] < w[i + 1]) return false;
    return true;
}

} // namespace

BigInt weyl_dimension(const Weight& w) {
    if (!weakly_decreasing(w))
        throw std::invalid_argument("weyl_dimension: weight is not dominant");
    const std::size_t m = w.size();
    BigInt num = 1, den = 1;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            num *= static_cast<long>(w[i] - w[j]) + static_cast<long>(j - i);
            den *= static_cast<long>(j - i);
        }
    }
    // num is divisible by den (Weyl's formula is an integer); exact division.
    return num / den;
}

CohomologyClass bwb(const Weight& w) {
    const int m = static_cast<int>(w.size());
    std::vector<int> v(w);
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] += m - 1 - i;

    std::vector<int> sorted(v);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) return CohomologyClass::none();

    int inversions = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] < v[j]) ++inversions;

    Weight dominant(sorted);
    for (int i = 0; i < m; ++i) dominant[static_cast<std::size_t>(i)] -= m - 1 - i;
    return CohomologyClass::at(inversions, weyl_dimension(dominant));
}

int grassmann_dim(int k, int n) {
    if (k < 0 || n < 1 || k >= n)
        throw std::invalid_argument("grassmann_dim: need 0 <= k < n");
    return (k + 1) * (n - k);
}

BigInt grassmann_degree(int k, int n) {
    // Standard-tableau count for the (k+1) x (n-k) rectangle: N! / prod(hooks).
    const int rows = k + 1, cols = n - k;
    const int N = grassmann_dim(k, n);
    BigInt fact = 1;
    for (int i = 2; i <= N; ++i) fact *= i;
    BigInt hooks = 1;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            hooks *= (cols - 1 - c) + (rows - 1 - r) + 1;
    return fact / hooks;
}

std::vector<Weight> omega_decompose(int k, int n, int q, int t) {
    if (k < 0 || k >= n)
        throw std::invalid_argument("omega_decompose: need 0 <= k < n");
    if (q < 0) throw std::invalid_argument("omega_decompose: negative q");
    if (q > grassmann_dim(k, n)) return {}; // no forms above top degree

    const int sub_rank = k + 1;   // subbundle block
    const int quot_rank = n - k;  // quotient bundle block

    std::vector<Weight> out;
    for (const Partition& lambda : partitions_in_box(q, sub_rank, quot_rank)) {
        const Partition mu = lambda.conjugate();
        Weight w;
        w.reserve(static_cast<std::size_t>(n + 1));
        // quotient block: dual of the conjugate Schur functor
        for (int i = quot_rank - 1; i >= 0; --i)
            w.push_back(-mu.part(static_cast<std::size_t>(i)));
        // subbundle block, the twist folded in
        for (int i = 0; i < sub_rank; ++i)
            w.push_back(lambda.part(static_cast<std::size_t>(i)) - t);
        out.push_back(std::move(w));
    }
    return out;
}

std::map<int, BigInt> grassmann_cohomology(int k, int n, int q, int t) {
    std::map<int, BigInt> out;
    for (const Weight& w : omega_decompose(k, n, q, t)) {
        CohomologyClass c = bwb(w);
        if (!c.zero) out[c.degree] += c.dim;
    }
    return out;
}

BigInt hodge_cell(int k, int n, int p, int q, int t) {
    if (q < 0 || q > grassmann_dim(k, n)) return 0;
    auto m = grassmann_cohomology(k, n, q, t);
    auto it = m.find(p);
    return it == m.end() ? BigInt(0) : it->second;
}

BigInt grassmann_betti(int k, int n, int i) {
    BigInt b = 0;
    const int N = grassmann_dim(k, n);
    for (int p = 0; p <= N && p <= i; ++p) {
        const int q = i - p;
        if (q > N) continue;
        b += hodge_cell(k, n, p, q, 0);
    }
    return b;
}

bool lemma01_nonvanishing(int n, int p, int q, int t) {
    if (n < 2) throw std::invalid_argument("lemma01_nonvanishing: need n >= 2");
    const int N = 2 * (n - 1); // dim G(1,n)
    if (p < 0 || p > N || q < 0 || q > N)
        throw std::invalid_argument("lemma01_nonvanishing: p or q out of range");

    // (1)  t = 0 and p = q
    if (t == 0 && p == q) return true;
    // (2)  p = 0 and t >= min(q+1, ceil(q/2)+2)
    if (p == 0 && t >= std::min(q + 1, (q + 1) / 2 + 2)) return true;
    // (2') p = dim G and t <= max(-2n+q+1, floor(q/2)-n-1)
    if (p == N && t <= std::max(-2 * n + q + 1, q / 2 - n - 1)) return true;
    // (3)  0 < p < dim G, p+1 <= t <= n-p, q = 2p+t-1
    if (p > 0 && p < N && p + 1 <= t && t <= n - p && q == 2 * p + t - 1) return true;
    // (3') 0 < p < dim G, n-p-2 <= t <= p-2n+1, q = 2p+t-2n+3.
    // This is the exact Serre dual of (3): substituting (p,q,t) ->
    // (dimG-p, dimG-q, -t) in (3) yields these bounds, and only these keep
    // the criterion equivalent to the BWB computation.
    if (p > 0 && p < N && n - p - 2 <= t && t <= p - 2 * n + 1 &&
        q == 2 * p + t - 2 * n + 3)
        return true;
    return false;
}

} // namespace fano::weyl
