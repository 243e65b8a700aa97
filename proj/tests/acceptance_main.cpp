// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Criteria 1-10 run against the library, criterion 11 drives the CLI binary.

#include "relctrl/controllability.hpp"
#include "relctrl/errors.hpp"
#include "relctrl/spec_io.hpp"
#include "relctrl/synthesis.hpp"
#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace relctrl;
using namespace relctrl::testing;
namespace fs = std::filesystem;
using nlohmann::json;

#ifndef RELCTRL_FIXTURE_DIR
#define RELCTRL_FIXTURE_DIR "tests/fixtures"
#endif
#ifndef RELCTRL_CLI_PATH
#define RELCTRL_CLI_PATH "./relctrl"
#endif

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s %2d  %s\n", ok ? "PASS" : "FAIL", number, name.c_str());
    if (!ok) {
        if (!detail.empty()) std::printf("          %s\n", detail.c_str());
        ++g_failures;
    }
}

ControlSequence scalar_controls(std::initializer_list<const char*> values) {
    ControlSequence u;
    for (const char* v : values) u.push_back(vecs({v}));
    return u;
}

// Completes a control row whose last entry was not published: the terminal
// condition forces C u(r1-1) = y* - A y(r1-1) - B y(r1-1-p).
Matrix back_substituted_last_control(const DelaySystem& sys, const Trajectory& partial,
                                     const Matrix& target, long r1) {
    Matrix rhs = sub(sub(target, mul(sys.a(), partial.state(r1 - 1))),
                     mul(sys.b(), partial.state(r1 - 1 - sys.delay())));
    Matrix ctc = mul(transpose(sys.c()), sys.c());
    Matrix u_last = solve(ctc, mul(transpose(sys.c()), rhs));
    if (mul(sys.c(), u_last) != rhs) throw Error("terminal condition unreachable in one step");
    return u_last;
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
    std::string cmd = std::string("\"") + RELCTRL_CLI_PATH + "\" " + args + " > \"" +
                      stdout_path.string() + "\" 2> /dev/null";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Ensemble {
    std::vector<DelaySystem> systems;
};

Ensemble make_ensemble(std::size_t count, unsigned seed) {
    std::mt19937 gen(seed);
    Ensemble e;
    // deterministic corner members first
    e.systems.push_back(DelaySystem(mat({{1, 2}, {0, 1}}), mat({{0, 1}, {1, 0}}), Matrix(2, 1), 1));
    e.systems.push_back(DelaySystem(Matrix::identity(2), Matrix::identity(2), mat({{1}, {0}}), 1));
    e.systems.push_back(
        DelaySystem(Matrix::identity(2), mat({{0, 1}, {1, 0}}), mat({{1, 0}, {0, 0}}), 1));
    e.systems.push_back(example_system());
    while (e.systems.size() < count) e.systems.push_back(random_system(gen));
    return e;
}

void criterion_1_2_3() {
    DelaySystem sys = example_system();
    KernelTable table(sys);
    InitialHistory hist = example_history();

    ControllabilityReport rep = analyze(sys, table, 3);
    criterion(1, "running example: rank 2, r* = 3, controllable",
              rep.rank_s == 2 && rep.r_star == 3 && rep.controllable);

    Gramian g = gramian(sys, table, 3);
    criterion(2, "running example: gramian [[3,1],[1,1]], det 2, positive definite",
              g.g == mat({{3, 1}, {1, 1}}) && det(g.g) == Scalar(2) && g.positive_definite);

    bool ok = true;
    SteeringPlan plan = synthesize(sys, table, hist, vec({21, 14}), 3);
    ok = ok && plan.eta == vec({2, 6});
    ok = ok && plan.control == scalar_controls({"6", "-2", "-2"});
    Trajectory traj = simulate(sys, hist, plan.control, 3);
    ok = ok && traj.state(1) == vec({10, 2}) && traj.state(2) == vec({13, 4}) &&
         traj.state(3) == vec({21, 14});
    ok = ok && plan.residual.is_zero() && verify_plan(sys, table, hist, plan, vec({21, 14}));
    criterion(3, "running example: eta (2,6), control (6,-2,-2), exact trajectory", ok);
}

void criterion_4() {
    DelaySystem sys = example_system();
    InitialHistory hist = example_history();
    const Matrix target = vec({21, 14});
    struct Row {
        const char* name;
        const char* u0;
        const char* u1;
        const char* y2_1; // published y(2) first component
    };
    const Row rows[] = {{"r", "6", "-2", "13"},   {"p", "6", "3", "18"},
                        {"q", "6", "5", "20"},    {"v", "6", "-12", "3"},
                        {"w", "6", "1/2", "31/2"}, {"l", "6", "-3/2", "27/2"}};
    bool ok = true;
    std::string detail;
    for (const Row& row : rows) {
        ControlSequence u = scalar_controls({row.u0, row.u1, "0"});
        Trajectory partial = simulate(sys, hist, u, 3);
        u[2] = back_substituted_last_control(sys, partial, target, 3);
        Trajectory t = simulate(sys, hist, u, 3);
        const bool row_ok = t.state(1) == vec({10, 2}) &&
                            t.state(2).at(0, 0) == Scalar::parse(row.y2_1) &&
                            t.state(2).at(1, 0) == Scalar(4) && t.state(3) == target;
        if (!row_ok) detail += std::string("row ") + row.name + " mismatch; ";
        ok = ok && row_ok;
    }
    criterion(4, "published control table: all six completed rows reach (21,14) exactly", ok, detail);
}

void criterion_5() {
    std::mt19937 gen(20260811);
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
        DelaySystem sys = random_system(gen, 2, 3, 2, 3);
        KernelTable table(sys);
        // zero residual everywhere in the sweep except the launch impulse
        // at r = -p-1, where it must be exactly the identity
        const long impulse = -sys.delay() - 1;
        for (long r = -sys.delay() - 2; r <= 20 && ok; ++r) {
            ok = r == impulse ? table.recurrence_residual(r) == Matrix::identity(sys.dim())
                              : table.recurrence_residual(r).is_zero();
        }
        for (long r = 0; r <= 10 && ok; ++r) {
            ok = ok && table.q(r, 0) == pow(sys.a(), static_cast<std::size_t>(r));
            ok = ok && table.q(r, r) == pow(sys.b(), static_cast<std::size_t>(r));
            ok = ok && table.q(r, r + 1).is_zero() && table.q(r, r + 3).is_zero();
        }
    }
    criterion(5, "kernel identities: recurrence residual and boundary rows on 50 systems", ok);
}

void criterion_6() {
    std::mt19937 gen(60);
    bool ok = true;
    for (int t = 0; t < 25 && ok; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t % 2);
        auto [a, b] = random_commuting_pair(gen, d);
        DelaySystem sys(a, b, Matrix(d, 1), 1);
        KernelTable table(sys);
        for (long r = 0; r <= 12 && ok; ++r)
            for (long i = 0; i <= r && ok; ++i) ok = table.q(r, i) == commutative_q(sys, r, i);
    }
    criterion(6, "commuting pairs: recursion equals the binomial closed form up to r = 12", ok);
}

void criterion_7() {
    std::mt19937 gen(70);
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
        DelaySystem sys = random_system(gen, 2, 3, 2, 4);
        KernelTable table(sys);
        InitialHistory hist = random_history(gen, sys);
        const long r1 = rand_int(gen, 1, 12);
        ControlSequence u = random_control(gen, sys, r1);
        ok = representation_residual(sys, table, hist, u, r1).is_zero();
    }
    criterion(7, "representation formula equals direct simulation on 50 random runs", ok);
}

void criterion_8_9_10() {
    Ensemble e = make_ensemble(110, 80);
    bool triangle_ok = true, stabilization_ok = true, steering_ok = true;
    std::string detail8, detail10;
    std::mt19937 gen(81);

    for (const DelaySystem& sys : e.systems) {
        KernelTable table(sys);
        const bool full = rank_condition(sys, table).second;
        const long h = guaranteed_steering_horizon(sys.dim(), sys.delay());

        // criterion 8: the three tests agree from the guaranteed horizon on
        const bool null_ok = kernel_null_test(sys, table, h - 1).full_rank;
        if (null_ok != full) {
            triangle_ok = false;
            detail8 = "rank vs null-space disagreement";
        }
        for (long r1 = h; r1 <= h + 3; ++r1) {
            if (gramian(sys, table, r1).positive_definite != full) {
                triangle_ok = false;
                detail8 = "rank vs gramian disagreement at r1=" + std::to_string(r1);
            }
        }

        // criterion 9: extra blocks never raise the rank
        Matrix s = kalman_matrix(sys, table);
        std::vector<Matrix> blocks = {s};
        const long d = static_cast<long>(sys.dim());
        for (long r = d; r <= d + 6; ++r)
            for (long i = 0; i <= r; ++i) blocks.push_back(mul(table.q(r, i), sys.c()));
        if (rank(hcat(blocks)) != rank(s)) stabilization_ok = false;

        // criterion 10: steering succeeds exactly on controllable members,
        // raises the declared errors otherwise
        InitialHistory hist = random_history(gen, sys);
        Matrix target = random_matrix(gen, sys.dim(), 1, 5, 2);
        if (full) {
            const long r1 = h + rand_int(gen, 0, 3);
            try {
                SteeringPlan plan = synthesize(sys, table, hist, target, r1);
                if (!plan.residual.is_zero() || !verify_plan(sys, table, hist, plan, target)) {
                    steering_ok = false;
                    detail10 = "steering missed the target";
                }
            } catch (const Error& err) {
                steering_ok = false;
                detail10 = std::string("unexpected error: ") + err.what();
            }
        } else {
            try {
                synthesize(sys, table, hist, target, h + 1);
                steering_ok = false;
                detail10 = "rank-deficient system did not raise";
            } catch (const NotControllableError&) {
            }
        }
    }

    // declared errors for the short-horizon and singular-gramian paths
    try {
        DelaySystem sys = example_system();
        KernelTable table(sys);
        synthesize(sys, table, example_history(), vec({21, 14}), 2);
        steering_ok = false;
        detail10 = "short horizon did not raise";
    } catch (const HorizonTooShortError&) {
    }
    try {
        DelaySystem gap(Matrix::identity(2), mat({{0, 1}, {1, 0}}), mat({{1, 0}, {0, 0}}), 1);
        KernelTable table(gap);
        InitialHistory hist(1, {vec({0, 0}), vec({0, 0})});
        synthesize(gap, table, hist, vec({1, 1}), 1); // rank ok, gramian singular
        steering_ok = false;
        detail10 = "singular gramian did not raise";
    } catch (const SingularGramianError&) {
    }

    criterion(8, "rank / null-space / gramian verdicts agree on 110 systems", triangle_ok, detail8);
    criterion(9, "appending kernel blocks up to r = d+6 never raises rank(S)", stabilization_ok);
    criterion(10, "steering exact on every controllable member, declared errors otherwise",
              steering_ok, detail10);
}

void criterion_11() {
    const fs::path fixtures = RELCTRL_FIXTURE_DIR;
    const fs::path work = fs::current_path() / "acceptance_out";
    fs::remove_all(work);
    fs::create_directories(work);
    bool ok = true;
    std::string detail;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += what + "; ";
        }
    };

    const std::string ex1 = "\"" + (fixtures / "example1.json").string() + "\"";

    // determinism: two runs of each command produce identical bytes
    int c1 = run_cli("analyze " + ex1 + " --json \"" + (work / "rep1.json").string() + "\"",
                     work / "an1.txt");
    int c2 = run_cli("analyze " + ex1 + " --json \"" + (work / "rep2.json").string() + "\"",
                     work / "an2.txt");
    expect(c1 == 0 && c2 == 0, "analyze exit codes");
    expect(slurp(work / "an1.txt") == slurp(work / "an2.txt"), "analyze stdout differs");
    expect(!slurp(work / "rep1.json").empty() &&
               slurp(work / "rep1.json") == slurp(work / "rep2.json"),
           "analyze report differs");

    expect(run_cli("synthesize " + ex1 + " --out \"" + (work / "s1").string() + "\"",
                   work / "sy1.txt") == 0,
           "synthesize run 1");
    expect(run_cli("synthesize " + ex1 + " --out \"" + (work / "s2").string() + "\"",
                   work / "sy2.txt") == 0,
           "synthesize run 2");
    expect(!slurp(work / "s1" / "plan.json").empty() &&
               slurp(work / "s1" / "plan.json") == slurp(work / "s2" / "plan.json"),
           "plan.json differs");
    expect(slurp(work / "s1" / "trajectory.csv") == slurp(work / "s2" / "trajectory.csv"),
           "trajectory.csv differs");

    const std::string q_spec = "\"" + (fixtures / "table2_q.json").string() + "\"";
    expect(run_cli("simulate " + q_spec + " --out \"" + (work / "t1.csv").string() + "\" --plot \"" +
                       (work / "t1.svg").string() + "\"",
                   work / "si1.txt") == 0,
           "simulate run 1");
    expect(run_cli("simulate " + q_spec + " --out \"" + (work / "t2.csv").string() + "\" --plot \"" +
                       (work / "t2.svg").string() + "\"",
                   work / "si2.txt") == 0,
           "simulate run 2");
    expect(!slurp(work / "t1.csv").empty() && slurp(work / "t1.csv") == slurp(work / "t2.csv"),
           "simulate csv differs");
    expect(!slurp(work / "t1.svg").empty() && slurp(work / "t1.svg") == slurp(work / "t2.svg"),
           "svg differs");

    // published values through the CLI surface
    json plan = json::parse(slurp(work / "s1" / "plan.json"));
    expect(plan["control"] == json::array({json::array({"6"}), json::array({"-2"}),
                                           json::array({"-2"})}),
           "plan control values");
    expect(plan["eta"] == json::array({"2", "6"}), "plan eta values");
    expect(plan["verified"] == true, "plan verified flag");
    expect(slurp(work / "s1" / "trajectory.csv").find("\n3,21,14,") != std::string::npos,
           "terminal row in trajectory.csv");
    expect(slurp(work / "t1.csv").find("\n2,20,4,-9") != std::string::npos,
           "simulate y(2) row for the third published control");

    // rational entries stay rational in the CSV
    expect(run_cli("simulate \"" + (fixtures / "table2_w.json").string() + "\" --out \"" +
                       (work / "w.csv").string() + "\"",
                   work / "siw.txt") == 0,
           "simulate half-step control row");
    expect(slurp(work / "w.csv").find("\n2,31/2,4,-9/2") != std::string::npos,
           "rational 31/2 in csv");

    // exit-code table: 2 parse/validation, 3 uncontrollable, 4 I/O
    expect(run_cli("analyze \"" + (fixtures / "bad_dims.json").string() + "\"",
                   work / "e2.txt") == 2,
           "bad spec exit 2");
    expect(run_cli("analyze \"" + (fixtures / "uncontrollable.json").string() + "\"",
                   work / "e3.txt") == 3,
           "uncontrollable analyze exit 3");
    expect(run_cli("synthesize \"" + (fixtures / "uncontrollable.json").string() + "\" --out \"" +
                       (work / "e3b").string() + "\"",
                   work / "e3b.txt") == 3,
           "uncontrollable synthesize exit 3");
    expect(run_cli("analyze \"" + (fixtures / "horizon_short.json").string() + "\"",
                   work / "e3c.txt") == 3,
           "short horizon exit 3");
    expect(run_cli("simulate \"" + (fixtures / "does_not_exist.json").string() + "\" --out \"" +
                       (work / "x.csv").string() + "\"",
                   work / "e4.txt") == 4,
           "missing file exit 4");

    criterion(11, "CLI: byte-identical reruns and declared exit codes", ok, detail);
}

} // namespace

int main() {
    set_arithmetic_mode(ArithmeticMode::Rational);
    criterion_1_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8_9_10();
    criterion_11();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
