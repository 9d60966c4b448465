#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace fano {

/// Integer partition: weakly decreasing nonnegative parts, trailing zeros
/// trimmed on construction.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
            if (parts_[i] < parts_[i + 1])
                throw std::invalid_argument("Partition: parts must be weakly decreasing");
        }
        if (!parts_.empty() && parts_.back() < 0)
            throw std::invalid_argument("Partition: parts must be nonnegative");
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    [[nodiscard]] const std::vector<int>& parts() const { return parts_; }
    [[nodiscard]] std::size_t rows() const { return parts_.size(); }
    [[nodiscard]] int cols() const { return parts_.empty() ? 0 : parts_[0]; }

    [[nodiscard]] int size() const {
        int s = 0;
        for (int p : parts_) s += p;
        return s;
    }

    [[nodiscard]] int part(std::size_t i) const {
        return i < parts_.size() ? parts_[i] : 0;
    }

    /// Transpose of the Young diagram.
    [[nodiscard]] Partition conjugate() const {
        if (parts_.empty()) return {};
        std::vector<int> conj(static_cast<std::size_t>(parts_[0]), 0);
        for (int p : parts_)
            for (int j = 0; j < p; ++j) ++conj[static_cast<std::size_t>(j)];
        return Partition(std::move(conj));
    }

    [[nodiscard]] bool fits_in_box(int max_rows, int max_cols) const {
        return static_cast<int>(rows()) <= max_rows && cols() <= max_cols;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    auto operator<=>(const Partition& o) const { return parts_ <=> o.parts_; }

private:
    std::vector<int> parts_;
};

/// All partitions of `size` whose diagram fits in a max_rows x max_cols box,
/// in lexicographically decreasing order of part vectors.
std::vector<Partition> partitions_in_box(int size, int max_rows, int max_cols);

} // namespace fano
