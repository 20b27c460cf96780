#include "riscov/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riscov {

namespace {

std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& header) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: empty input, expected header '" + header + "'");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != header) {
        throw std::runtime_error("csv: header '" + line + "' does not match '" + header + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

void expect_width(const std::vector<std::string>& row, std::size_t n) {
    if (row.size() != n) {
        throw std::runtime_error("csv: expected " + std::to_string(n) + " columns, got " + std::to_string(row.size()));
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_buildings(std::ostream& out, const std::vector<Building>& buildings) {
    out << kBuildingsHeader << '\n';
    for (const auto& b : buildings) {
        out << b.id << ',' << format_number(b.cx) << ',' << format_number(b.cy) << ',' << format_number(b.length) << ',' << format_number(b.width) << ','
            << format_number(b.height) << ',' << format_number(b.omega) << '\n';
    }
}

void write_users(std::ostream& out, const std::vector<UserPosition>& users) {
    out << kUsersHeader << '\n';
    for (const auto& u : users) {
        out << u.id << ',' << format_number(u.x) << ',' << format_number(u.y) << '\n';
    }
}

void write_satellites(std::ostream& out, std::span<const SatellitePosition> sats) {
    out << kSatellitesHeader << '\n';
    for (std::size_t k = 0; k < sats.size(); ++k) {
        out << k << ',' << format_number(sats[k].x) << ',' << format_number(sats[k].y) << ',' << format_number(sats[k].z) << '\n';
    }
}

void write_power_matrices(std::ostream& out, const PowerMatrixSet& w) {
    out << kPowerHeader << '\n';
    for (std::size_t k = 0; k < w.n_satellites(); ++k) {
        const auto& block = w.block(k);
        for (std::size_t l = 0; l < block.nlos_users.size(); ++l) {
            for (const auto& e : block.rows[l]) {
                out << k << ',' << block.nlos_users[l] << ',' << e.site / kFacetsPerBuilding << ','
                    << e.site % kFacetsPerBuilding + 1 << ',' << format_number(e.power) << '\n';
            }
        }
    }
}

void write_mask(std::ostream& out, const DeploymentMask& mask) {
    out << kMaskHeader << '\n';
    for (std::size_t i = 0; i < mask.n_buildings(); ++i) {
        for (int j = 1; j <= kFacetsPerBuilding; ++j) {
            if (mask.get(i, j)) {
                out << i << ',' << j << '\n';
            }
        }
    }
}

void write_history(std::ostream& out, const std::vector<double>& history) {
    out << kHistoryHeader << '\n';
    for (std::size_t g = 0; g < history.size(); ++g) {
        out << g << ',' << format_number(history[g]) << '\n';
    }
}

void write_fig3(std::ostream& out, const std::vector<Fig3Row>& rows) {
    out << kFig3Header << '\n';
    for (const auto& r : rows) {
        out << format_number(r.elevation_deg) << ',' << format_number(r.pga_coverage) << ',' << format_number(r.exhaustive_coverage) << ','
            << format_number(r.random_coverage) << ',' << format_number(r.bound_coverage) << '\n';
    }
}

void write_fig4(std::ostream& out, const std::vector<Fig4Row>& rows) {
    out << kFig4Header << '\n';
    for (const auto& r : rows) {
        out << format_number(r.density) << ',' << format_number(r.gamma) << ',' << format_number(r.optimized_coverage) << ','
            << format_number(r.random_coverage) << '\n';
    }
}

void write_fig5(std::ostream& out, const std::vector<Fig5Row>& rows) {
    out << kFig5Header << '\n';
    for (const auto& r : rows) {
        out << r.k_train << ',' << format_number(r.train_coverage) << ',' << format_number(r.test_coverage_mean) << ','
            << format_number(r.test_coverage_std) << '\n';
    }
}

void write_report(std::ostream& out, const ExperimentReport& report) {
    out << kReportHeader << '\n';
    for (const auto& c : report.cells) {
        out << format_number(c.gamma) << ',' << c.k_train << ',' << format_number(c.train_coverage) << ',' << format_number(c.test_coverage_mean)
            << ',' << format_number(c.test_coverage_std) << ',' << format_number(c.random_baseline_coverage) << ','
            << format_number(c.bound_coverage) << '\n';
    }
}

std::vector<Building> read_buildings(std::istream& in) {
    std::vector<Building> out;
    for (const auto& row : read_rows(in, kBuildingsHeader)) {
        expect_width(row, 7);
        out.push_back({std::stoul(row[0]), std::stod(row[1]), std::stod(row[2]), std::stod(row[3]),
                       std::stod(row[4]), std::stod(row[5]), std::stod(row[6])});
    }
    return out;
}

std::vector<UserPosition> read_users(std::istream& in) {
    std::vector<UserPosition> out;
    for (const auto& row : read_rows(in, kUsersHeader)) {
        expect_width(row, 3);
        out.push_back({std::stoul(row[0]), std::stod(row[1]), std::stod(row[2]), 0.0});
    }
    return out;
}

DeploymentMask read_mask(std::istream& in, std::size_t n_b) {
    DeploymentMask mask(n_b);
    for (const auto& row : read_rows(in, kMaskHeader)) {
        expect_width(row, 2);
        const std::size_t i = std::stoul(row[0]);
        const int j = std::stoi(row[1]);
        if (i >= n_b || j < 1 || j > kFacetsPerBuilding) {
            throw std::runtime_error("csv: mask entry (" + row[0] + "," + row[1] + ") out of range");
        }
        mask.set(i, j, true);
    }
    return mask;
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    out << content;
}

}  // namespace riscov
