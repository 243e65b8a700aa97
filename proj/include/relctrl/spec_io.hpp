#pragma once

#include "relctrl/controllability.hpp"
#include "relctrl/kernel.hpp"
#include "relctrl/synthesis.hpp"
#include "relctrl/system.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace relctrl {

/// Target condition y(r1) = y*.
struct TargetSpec {
    long r1 = 0;
    Matrix y;
    bool operator==(const TargetSpec& rhs) const { return r1 == rhs.r1 && y == rhs.y; }
};

/// One problem instance as read from a spec file: system matrices, delay,
/// initial history, optional target and optional control sequence.
struct SystemSpec {
    ArithmeticMode mode = ArithmeticMode::Rational;
    Matrix a, b, c;
    int p = 1;
    std::vector<Matrix> history; // psi(-p)..psi(0)
    std::optional<TargetSpec> target;
    std::optional<ControlSequence> control;

    DelaySystem to_system() const { return DelaySystem(a, b, c, p); }
    InitialHistory to_history() const { return InitialHistory(p, history); }

    bool operator==(const SystemSpec& rhs) const;
};

/// Parses and validates a spec document. Throws SpecParseError with a
/// field path on malformed input. Sets the global arithmetic mode to the
/// spec's "arithmetic" field (unless force_float overrides it) before any
/// value is parsed.
SystemSpec spec_from_json(const nlohmann::json& doc, bool force_float = false);
SystemSpec load_spec(const std::filesystem::path& path, bool force_float = false);

/// Canonical serialization: integers that fit in int64 appear bare, all
/// other rationals as "n/m" strings; floats as shortest round-trip decimals.
nlohmann::json spec_to_json(const SystemSpec& spec);

nlohmann::json report_to_json(const ControllabilityReport& report,
                              const std::optional<Gramian>& gram);
std::string report_to_text(const ControllabilityReport& report,
                           const std::optional<Gramian>& gram);

nlohmann::json plan_to_json(const SteeringPlan& plan, bool verified);

/// CSV rows r in [-p, r1] with header r,y_1..y_d,u_1..u_k; control columns
/// are blank on history rows and the terminal row.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ControlSequence& u);

/// Reads a trajectory CSV back (used to re-validate serialized trajectories).
std::pair<Trajectory, ControlSequence> read_trajectory_csv(std::istream& in, int p, std::size_t d,
                                                           std::size_t k);

/// Minimal static SVG: one polyline per state component, circle markers on
/// the history window and the terminal point.
void write_trajectory_svg(std::ostream& out, const Trajectory& traj);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace relctrl
