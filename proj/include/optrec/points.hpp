#pragma once

#include <cstddef>
#include <fstream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace optrec {

/// Ordered sample nodes x_1..x_n in R^d, stored row-major.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim) : dim_(dim) {}
    PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim_ == 0 || coords_.size() % dim_ != 0)
            throw std::invalid_argument("PointSet: coordinate count not a multiple of dim");
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return size() == 0; }

    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_.data() + i * dim_, dim_);
    }
    std::span<double> point(std::size_t i) {
        return std::span<double>(coords_.data() + i * dim_, dim_);
    }
    void push_back(std::span<const double> x) {
        if (x.size() != dim_) throw std::invalid_argument("PointSet::push_back: dimension mismatch");
        coords_.insert(coords_.end(), x.begin(), x.end());
    }
    const std::vector<double>& data() const { return coords_; }
    std::vector<double>& data() { return coords_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// CSV: one point per line, d comma-separated coordinates.
inline void write_csv(std::ostream& os, const PointSet& ps) {
    os.precision(17);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto x = ps.point(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j) os << ',';
            os << x[j];
        }
        os << '\n';
    }
}

inline void write_csv_file(const std::string& path, const PointSet& ps) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_csv_file: cannot open " + path);
    write_csv(f, ps);
}

inline PointSet read_csv(std::istream& is) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            coords.push_back(std::stod(cell));
            ++count;
        }
        if (dim == 0) dim = count;
        else if (count != dim) throw std::runtime_error("read_csv: ragged rows");
    }
    if (dim == 0) throw std::runtime_error("read_csv: no points");
    return PointSet(dim, std::move(coords));
}

inline PointSet read_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_csv_file: cannot open " + path);
    return read_csv(f);
}

} // namespace optrec
