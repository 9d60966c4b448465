#include "fanostab/partition.hpp"

namespace fano {

namespace {

void extend(std::vector<Partition>& out, std::vector<int>& cur,
            int remaining, int rows_left, int max_part) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (rows_left == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        extend(out, cur, remaining - p, rows_left - 1, p);
        cur.pop_back();
    }
}

} // namespace

std::vector<Partition> partitions_in_box(int size, int max_rows, int max_cols) {
    std::vector<Partition> out;
    if (size < 0 || max_rows < 0 || max_cols < 0) return out;
    std::vector<int> cur;
    extend(out, cur, size, max_rows, max_cols);
    return out;
}

} // namespace fano
