#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "riscov/channel.hpp"
#include "riscov/harness.hpp"
#include "riscov/opt.hpp"
#include "riscov/satellites.hpp"
#include "riscov/scene.hpp"

namespace riscov {

// Column headers are part of the file contract and are written verbatim.
inline constexpr const char* kBuildingsHeader = "id,cx,cy,L,W,H,omega";
inline constexpr const char* kUsersHeader = "id,x,y";
inline constexpr const char* kSatellitesHeader = "k,x,y,z";
inline constexpr const char* kPowerHeader = "k,user_id,building_id,facet_id,power_watts";
inline constexpr const char* kMaskHeader = "building_id,facet_id";
inline constexpr const char* kHistoryHeader = "generation,best_fitness";
inline constexpr const char* kFig3Header = "elevation_deg,pga_coverage,exhaustive_coverage,random_coverage,bound_coverage";
inline constexpr const char* kFig4Header = "density,gamma,optimized_coverage,random_coverage";
inline constexpr const char* kFig5Header = "k_train,train_coverage,test_coverage_mean,test_coverage_std";
inline constexpr const char* kReportHeader =
    "gamma,k_train,train_coverage,test_coverage_mean,test_coverage_std,random_baseline_coverage,bound_coverage";
inline constexpr const char* kBoundEpsilonHeader = "epsilon,coverage";
inline constexpr const char* kBoundGammaHeader = "gamma,n_r,coverage";

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

void write_buildings(std::ostream& out, const std::vector<Building>& buildings);
void write_users(std::ostream& out, const std::vector<UserPosition>& users);
void write_satellites(std::ostream& out, std::span<const SatellitePosition> sats);
void write_power_matrices(std::ostream& out, const PowerMatrixSet& w);
void write_mask(std::ostream& out, const DeploymentMask& mask);
void write_history(std::ostream& out, const std::vector<double>& history);
void write_fig3(std::ostream& out, const std::vector<Fig3Row>& rows);
void write_fig4(std::ostream& out, const std::vector<Fig4Row>& rows);
void write_fig5(std::ostream& out, const std::vector<Fig5Row>& rows);
void write_report(std::ostream& out, const ExperimentReport& report);

std::vector<Building> read_buildings(std::istream& in);
std::vector<UserPosition> read_users(std::istream& in);

/// Mask rows list (building_id, facet_id) pairs; n_b sizes the result.
DeploymentMask read_mask(std::istream& in, std::size_t n_b);

/// Writes `content` to dir/name, creating dir as needed. Throws on I/O failure.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

}  // namespace riscov
