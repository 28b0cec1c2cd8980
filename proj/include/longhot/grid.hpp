#pragma once

#include "longhot/geometry.hpp"

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace longhot {

enum class Cell : uint8_t { Free = 0, Obstacle = 1 };

struct InvalidScene : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground-truth world raster. Immutable once built; shared freely across
// episode workers.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, double resolution = 0.25, Cell fill = Cell::Free)
        : width_(width), height_(height), resolution_(resolution),
          cells_(static_cast<size_t>(width) * height, fill) {
        if (width <= 0 || height <= 0 || resolution <= 0.0)
            throw InvalidScene("grid dimensions must be positive");
    }

    static OccupancyGrid from_cells(int width, int height, double resolution, std::vector<Cell> cells) {
        OccupancyGrid g(width, height, resolution);
        if (cells.size() != g.cells_.size()) throw InvalidScene("cell payload size mismatch");
        g.cells_ = std::move(cells);
        return g;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    int cell_count() const { return width_ * height_; }
    double extent_x() const { return width_ * resolution_; }
    double extent_y() const { return height_ * resolution_; }

    // A scene counts as large when either metric extent exceeds 40 m.
    bool is_large() const { return extent_x() > 40.0 || extent_y() > 40.0; }

    bool in_bounds(const CellIndex& c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }

    int index(const CellIndex& c) const { return c.y * width_ + c.x; }
    CellIndex cell_at(int index) const { return {index % width_, index / width_}; }

    Cell at(const CellIndex& c) const { return cells_[static_cast<size_t>(index(c))]; }
    void set(const CellIndex& c, Cell v) { cells_[static_cast<size_t>(index(c))] = v; }

    bool is_free(const CellIndex& c) const { return in_bounds(c) && at(c) == Cell::Free; }
    bool point_free(const Point& p) const { return is_free(cell_of(p, resolution_)); }

    CellIndex cell_of_point(const Point& p) const { return cell_of(p, resolution_); }
    Point center_of(const CellIndex& c) const { return cell_center(c, resolution_); }

    const std::vector<Cell>& cells() const { return cells_; }

    void close_boundary() {
        for (int x = 0; x < width_; ++x) {
            set({x, 0}, Cell::Obstacle);
            set({x, height_ - 1}, Cell::Obstacle);
        }
        for (int y = 0; y < height_; ++y) {
            set({0, y}, Cell::Obstacle);
            set({width_ - 1, y}, Cell::Obstacle);
        }
    }

    bool boundary_closed() const {
        for (int x = 0; x < width_; ++x)
            if (at({x, 0}) != Cell::Obstacle || at({x, height_ - 1}) != Cell::Obstacle) return false;
        for (int y = 0; y < height_; ++y)
            if (at({0, y}) != Cell::Obstacle || at({width_ - 1, y}) != Cell::Obstacle) return false;
        return true;
    }

    std::vector<int> free_cell_indices() const {
        std::vector<int> out;
        for (int i = 0; i < cell_count(); ++i)
            if (cells_[static_cast<size_t>(i)] == Cell::Free) out.push_back(i);
        return out;
    }

    friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) = default;

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 0.25;
    std::vector<Cell> cells_;
};

// Diagonal moves may not cut between two touching obstacle corners: both
// orthogonal side cells must be free.
inline bool diagonal_allowed(const OccupancyGrid& grid, const CellIndex& from, int dx, int dy) {
    return grid.is_free({from.x + dx, from.y}) && grid.is_free({from.x, from.y + dy});
}

// Row-major run-length encoding: "<count>.<count>#..." with '.' free and
// '#' obstacle. Canonical form always spells the count.
inline std::string encode_cells_rle(const OccupancyGrid& grid) {
    std::string out;
    const auto& cells = grid.cells();
    size_t i = 0;
    while (i < cells.size()) {
        size_t j = i;
        while (j < cells.size() && cells[j] == cells[i]) ++j;
        out += std::to_string(j - i);
        out += cells[i] == Cell::Free ? '.' : '#';
        i = j;
    }
    return out;
}

inline std::vector<Cell> decode_cells_rle(const std::string& rle, size_t expected) {
    std::vector<Cell> cells;
    cells.reserve(expected);
    size_t i = 0;
    while (i < rle.size()) {
        if (!std::isdigit(static_cast<unsigned char>(rle[i])))
            throw InvalidScene("rle: expected run length at offset " + std::to_string(i));
        size_t count = 0;
        while (i < rle.size() && std::isdigit(static_cast<unsigned char>(rle[i]))) {
            count = count * 10 + static_cast<size_t>(rle[i] - '0');
            ++i;
        }
        if (i >= rle.size() || (rle[i] != '.' && rle[i] != '#'))
            throw InvalidScene("rle: expected '.' or '#' at offset " + std::to_string(i));
        cells.insert(cells.end(), count, rle[i] == '.' ? Cell::Free : Cell::Obstacle);
        ++i;
    }
    if (cells.size() != expected)
        throw InvalidScene("rle: decoded " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(expected));
    return cells;
}

} // namespace longhot
