// relctrl: relative-controllability analysis, steering synthesis and
// simulation for linear difference systems with one pure delay.
//
// Exit codes: 0 success, 2 parse/validation failure, 3 uncontrollable,
// 4 I/O failure.

#include "relctrl/controllability.hpp"
#include "relctrl/errors.hpp"
#include "relctrl/spec_io.hpp"
#include "relctrl/synthesis.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace relctrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitUncontrollable = 3;
constexpr int kExitIo = 4;

int cmd_analyze(const fs::path& spec_path, const std::optional<fs::path>& json_out,
                bool force_float) {
    SystemSpec spec = load_spec(spec_path, force_float);
    DelaySystem sys = spec.to_system();
    KernelTable table(sys);

    std::optional<long> r1;
    if (spec.target) r1 = spec.target->r1;
    ControllabilityReport report = analyze(sys, table, r1);
    std::optional<Gramian> gram;
    if (r1) gram = gramian(sys, table, *r1);

    std::cout << report_to_text(report, gram);
    if (json_out) write_text_file(*json_out, report_to_json(report, gram).dump(2) + "\n");
    return report.controllable ? kExitOk : kExitUncontrollable;
}

int cmd_synthesize(const fs::path& spec_path, const fs::path& out_dir, bool force_float) {
    SystemSpec spec = load_spec(spec_path, force_float);
    if (!spec.target) throw SpecParseError("spec.target: required by synthesize");
    DelaySystem sys = spec.to_system();
    KernelTable table(sys);
    InitialHistory hist = spec.to_history();

    SteeringPlan plan = synthesize(sys, table, hist, spec.target->y, spec.target->r1);
    const bool verified = verify_plan(sys, table, hist, plan, spec.target->y);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());
    write_text_file(out_dir / "plan.json", plan_to_json(plan, verified).dump(2) + "\n");

    Trajectory traj = simulate(sys, hist, plan.control, plan.r1);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj, plan.control);
    write_text_file(out_dir / "trajectory.csv", csv.str());

    std::cout << "wrote " << (out_dir / "plan.json").string() << "\n";
    std::cout << "wrote " << (out_dir / "trajectory.csv").string() << "\n";
    std::cout << "control:";
    for (const Matrix& u : plan.control) {
        for (std::size_t i = 0; i < u.rows(); ++i) std::cout << " " << u.at(i, 0).to_string();
    }
    std::cout << "\nachieved y(" << plan.r1 << "):";
    for (std::size_t i = 0; i < plan.achieved_state.rows(); ++i) {
        std::cout << " " << plan.achieved_state.at(i, 0).to_string();
    }
    std::cout << "\nverified: " << (verified ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_simulate(const fs::path& spec_path, const fs::path& csv_out,
                 const std::optional<fs::path>& svg_out, bool force_float) {
    SystemSpec spec = load_spec(spec_path, force_float);
    if (!spec.control) throw SpecParseError("spec.control: required by simulate");
    DelaySystem sys = spec.to_system();
    InitialHistory hist = spec.to_history();
    const long r1 = static_cast<long>(spec.control->size());

    Trajectory traj = simulate(sys, hist, *spec.control, r1);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj, *spec.control);
    write_text_file(csv_out, csv.str());
    std::cout << "wrote " << csv_out.string() << "\n";

    if (svg_out) {
        std::ostringstream svg;
        write_trajectory_svg(svg, traj);
        write_text_file(*svg_out, svg.str());
        std::cout << "wrote " << svg_out->string() << "\n";
    }
    return kExitOk;
}

int cmd_kernel(const fs::path& spec_path, long from, long to, bool force_float) {
    SystemSpec spec = load_spec(spec_path, force_float);
    if (from > to) throw SpecParseError("kernel: --from must be <= --to");
    DelaySystem sys = spec.to_system();
    KernelTable table(sys);
    for (long r = from; r <= to; ++r) {
        std::cout << "Y(" << r << ") = " << table.y(r).to_string() << "\n";
        for (long i = 0; i <= std::max<long>(r, 0); ++i) {
            std::cout << "Q(" << r << "," << i << ") = " << table.q(r, i).to_string() << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative controllability of linear difference systems with one pure delay"};
    app.require_subcommand(1);
    bool force_float = false;
    app.add_flag("--float", force_float, "run in floating-point mode regardless of the spec");

    std::string spec_path;
    std::string out_dir = "out";
    std::string csv_out = "trajectory.csv";
    std::string json_out, svg_out;
    long from = 0, to = 0;

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "rank condition, minimal horizon, verdict");
    analyze_cmd->add_option("spec", spec_path, "system spec JSON")->required();
    analyze_cmd->add_option("--json", json_out, "also write the report as JSON");

    CLI::App* synth_cmd = app.add_subcommand("synthesize", "Gramian steering control for the target");
    synth_cmd->add_option("spec", spec_path, "system spec JSON")->required();
    synth_cmd->add_option("--out", out_dir, "output directory for plan.json and trajectory.csv");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the recurrence under spec.control");
    sim_cmd->add_option("spec", spec_path, "system spec JSON")->required();
    sim_cmd->add_option("--out", csv_out, "trajectory CSV path");
    sim_cmd->add_option("--plot", svg_out, "also write an SVG plot");

    CLI::App* kernel_cmd = app.add_subcommand("kernel", "print Q(r,i) and Y(r) over a range");
    kernel_cmd->add_option("spec", spec_path, "system spec JSON")->required();
    kernel_cmd->add_option("--from", from, "first r")->required();
    kernel_cmd->add_option("--to", to, "last r")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitParse : kExitOk;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) {
            std::optional<fs::path> jpath;
            if (!json_out.empty()) jpath = json_out;
            return cmd_analyze(spec_path, jpath, force_float);
        }
        if (app.got_subcommand(synth_cmd)) return cmd_synthesize(spec_path, out_dir, force_float);
        if (app.got_subcommand(sim_cmd)) {
            std::optional<fs::path> spath;
            if (!svg_out.empty()) spath = svg_out;
            return cmd_simulate(spec_path, csv_out, spath, force_float);
        }
        if (app.got_subcommand(kernel_cmd)) return cmd_kernel(spec_path, from, to, force_float);
    } catch (const SpecParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const NotControllableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUncontrollable;
    } catch (const HorizonTooShortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUncontrollable;
    } catch (const SingularGramianError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUncontrollable;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}
