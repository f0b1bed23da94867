// cli.cpp: subcommand definitions, configuration merge and dataset writers

#include "cli.hpp"

#include "output.hpp"

#include "tpdicke/classical.hpp"
#include "tpdicke/eigensolve.hpp"
#include "tpdicke/errors.hpp"
#include "tpdicke/integrable.hpp"
#include "tpdicke/model.hpp"
#include "tpdicke/peres.hpp"
#include "tpdicke/spectral_stats.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace tpdicke::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    // model
    double omega{1.0};
    double omega0{0.0};
    double gamma{0.0};
    double j{0.5};
    int nmax{200};
    // diagonalisation and statistics
    double delta{kDefaultConvergenceDelta};
    // The equivalence check needs eigenvalues converged well past 1e−8.
    double check_delta{1e-10};
    std::vector<std::string> sectors;
    double epsilon_perturb{0.0};
    std::vector<std::string> ops;
    bool overlay{false};
    int nc_max{20};
    std::size_t window{kDefaultWindowLevels};
    std::size_t stride{kDefaultWindowStride};
    int nu{kDefaultUnfoldHalfWindow};
    std::size_t width{1000};
    std::size_t bins{40};
    double s_max{4.0};
    // classical
    double energy{0.0};
    double tmax{1000.0};
    std::uint64_t seed{1};
    int trajectories{25};
    int n_theta{360};
    int cells{100};
    // io
    std::string out_dir{"."};
    std::string config;
};

const std::vector<std::string> kOpNames{"number", "jz", "jx", "jx2", "jsquared", "cdagc"};

int to_two_j(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (!(rounded >= 1.0) || std::abs(twice - rounded) > 1e-9)
        throw InvalidParameters("--j must be a positive integer or half-integer, got " + format_double(j));
    return static_cast<int>(rounded);
}

ModelParams model_from(const Options& o) {
    ModelParams p;
    p.omega = o.omega;
    p.omega0 = o.omega0;
    p.gamma = o.gamma;
    p.two_j = to_two_j(o.j);
    p.n_max = o.nmax;
    p.validate();
    return p;
}

std::vector<std::optional<ParitySector>> sectors_from(const std::vector<std::string>& names,
                                                      std::vector<std::string> fallback) {
    const auto& list = names.empty() ? fallback : names;
    std::vector<std::optional<ParitySector>> out;
    for (const auto& n : list) {
        if (n == "all") {
            for (auto s : kAllSectors) out.emplace_back(s);
        } else if (n == "full") {
            out.emplace_back(std::nullopt);
        } else if (auto s = parse_sector(n)) {
            out.emplace_back(*s);
        } else {
            throw InvalidParameters("--sector: unknown parity sector '" + n + "' (use +1, -1, +i, -i, all or full)");
        }
    }
    return out;
}

fs::path prepare_out_dir(const Options& o) {
    fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InvalidParameters("--out-dir: cannot create " + dir.string());
    return dir;
}

// Echo of every option that reaches the command, as key=value lines that
// --config accepts, so a manifest alone is enough to replay the run.
std::vector<std::string> replay_lines(const CLI::App& sub) {
    std::vector<std::string> lines;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config" || name == "out-dir") continue;
        std::vector<std::string> values;
        if (opt->count() > 0)
            values = opt->results();
        else if (const auto d = opt->get_default_str(); !d.empty() && d != "{}" && d != "[]")
            values = {d};
        if (values.empty()) continue;
        if (values.size() == 1 && opt->get_items_expected_max() <= 1) {
            lines.push_back(name + "=" + values.front());
        } else {
            std::string joined;
            for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
            lines.push_back(name + "=[" + joined + "]");
        }
    }
    return lines;
}

void fill_manifest_params(Manifest& m, const ModelParams& p, bool quantum) {
    auto& js = m.params();
    js["omega"] = p.omega;
    js["omega0"] = p.omega0;
    js["gamma"] = p.gamma;
    if (quantum) {
        js["j"] = p.j();
        js["two_j"] = p.two_j;
        js["n_max"] = p.n_max;
    }
}

void finish(Manifest& m, const CLI::App& sub, const fs::path& dir, std::ostream& out) {
    json replay = json::array();
    for (const auto& l : replay_lines(sub)) replay.push_back(l);
    m.knobs()["replay_config"] = replay;
    const auto path = m.write(dir);
    out << "manifest " << path.string() << '\n';
}

// ---------------------------------------------------------------- spectrum

void cmd_spectrum(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto params = model_from(o);
    params.require_normal_phase();
    const auto dir = prepare_out_dir(o);
    Manifest m("spectrum");
    fill_manifest_params(m, params, true);
    m.knobs()["delta"] = o.delta;
    m.knobs()["epsilon_perturb"] = o.epsilon_perturb;

    CsvWriter csv(dir / "spectrum.csv", {"sector", "k", "energy", "epsilon"});
    auto emit = [&](const SpectrumResult& r) {
        const std::string label = basis_label(r.sector);
        for (std::size_t k = 0; k < r.converged_count; ++k)
            csv.cell(label).cell(k).cell(r.energies[k]).cell(r.energies[k] / params.j()).end_row();
        m.results()[label] = {{"dim", r.dim()}, {"converged", r.converged_count}};
        out << "sector " << label << ": dim " << r.dim() << ", converged " << r.converged_count << '\n';
    };
    if (o.epsilon_perturb != 0.0) {
        auto r = diagonalize(perturbed_hamiltonian(params, o.epsilon_perturb), params, true);
        r.converged_count = converged_count(r, o.delta);
        emit(r);
    } else {
        for (auto s : sectors_from(o.sectors, {"all"})) emit(solve(params, s, o.delta));
    }
    csv.close();
    m.add_output(csv.path());
    finish(m, sub, dir, out);
}

// ------------------------------------------------------------------- peres

void cmd_peres(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto params = model_from(o);
    params.require_normal_phase();
    if (o.ops.empty()) throw InvalidParameters("--op: at least one observable is required");
    const auto dir = prepare_out_dir(o);
    Manifest m("peres");
    fill_manifest_params(m, params, true);
    m.knobs()["delta"] = o.delta;
    m.knobs()["epsilon_perturb"] = o.epsilon_perturb;
    m.knobs()["dominance"] = "x when max |<n,m_x|E>|^2 exceeds max |<n,m_z|E>|^2";

    SpectrumResult result;
    if (o.epsilon_perturb != 0.0) {
        result = diagonalize(perturbed_hamiltonian(params, o.epsilon_perturb), params, true);
        result.converged_count = converged_count(result, o.delta);
    } else {
        const auto sectors = sectors_from(o.sectors, {"+1"});
        if (sectors.size() != 1) throw InvalidParameters("--sector: peres takes a single basis");
        result = solve(params, sectors.front(), o.delta);
    }
    m.results()["basis"] = basis_label(result.sector);
    m.results()["dim"] = result.dim();
    m.results()["converged"] = result.converged_count;
    const auto labels = dominance_classify(result, params);

    for (const auto& name : o.ops) {
        std::vector<PeresPoint> points;
        if (name == "cdagc") {
            points = peres_cdagc(result, params);
        } else {
            Observable which = Observable::NumberOp;
            if (name == "jz") which = Observable::Jz;
            else if (name == "jx") which = Observable::Jx;
            else if (name == "jx2") which = Observable::Jx2;
            else if (name == "jsquared") which = Observable::JSquared;
            points = peres_lattice(result, observable(params, which), params);
        }
        attach_dominance(points, labels);
        CsvWriter csv(dir / ("peres_" + name + ".csv"),
                      {"k", "epsilon", "value", "value_over_j", "value_over_j2", "dominance"});
        for (const auto& p : points)
            csv.cell(p.k).cell(p.epsilon).cell(p.value).cell(p.value_over_j).cell(p.value_over_j2)
                .cell(p.dominance ? to_string(*p.dominance) : std::string("")).end_row();
        csv.close();
        m.add_output(csv.path());
        out << "peres " << name << ": " << points.size() << " points\n";
    }

    if (o.overlay) {
        // Analytic curves always use the ω₀ = 0 solution.
        ModelParams integrable = params;
        integrable.omega0 = 0.0;
        const std::vector<std::pair<OverlayFamily, std::string>> families{
            {OverlayFamily::FixedNcVsMx, "overlay_nc_vs_mx.csv"},
            {OverlayFamily::FixedNcVsMx2, "overlay_nc_vs_mx2.csv"},
            {OverlayFamily::FixedMx2VsNc, "overlay_mx2_vs_nc.csv"}};
        for (const auto& [family, file] : families) {
            CsvWriter csv(dir / file, {"curve_id", "n_c", "m_x_or_mx2", "epsilon"});
            for (const auto& p : overlay_curves(integrable, o.nc_max, family))
                csv.cell(p.curve_id).cell(p.n_c).cell(p.mx_or_mx2).cell(p.epsilon).end_row();
            csv.close();
            m.add_output(csv.path());
        }
        m.knobs()["overlay_omega0"] = 0.0;
    }
    finish(m, sub, dir, out);
}

// ------------------------------------------------------------------- ratio

void cmd_ratio(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto params = model_from(o);
    params.require_normal_phase();
    const auto dir = prepare_out_dir(o);
    Manifest m("ratio");
    fill_manifest_params(m, params, true);
    m.knobs()["delta"] = o.delta;
    m.knobs()["window"] = o.window;
    m.knobs()["stride"] = o.stride;

    const auto sectors = sectors_from(o.sectors, {"all"});
    std::vector<std::vector<RatioPoint>> curves;
    std::vector<std::string> labels;
    for (auto s : sectors) {
        const auto r = solve(params, s, o.delta);
        curves.push_back(windowed_mean_ratio(r.converged_energies(), params, o.window, o.stride));
        labels.push_back(basis_label(s));
        m.results()[labels.back()] = {{"dim", r.dim()}, {"converged", r.converged_count}};
    }
    CsvWriter csv(dir / "ratio.csv", {"epsilon_center", "r_mean", "n_levels", "sector_or_avg"});
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (const auto& p : curves[c]) csv.cell(p.epsilon_center).cell(p.r_mean).cell(p.n_levels).cell(labels[c]).end_row();
    if (curves.size() > 1) {
        const auto avg = average_ratio_curves(curves);
        for (const auto& p : avg) csv.cell(p.epsilon_center).cell(p.r_mean).cell(p.n_levels).cell(std::string("avg")).end_row();
        out << "ratio: " << avg.size() << " averaged windows over " << curves.size() << " sectors\n";
    } else {
        out << "ratio: " << curves.front().size() << " windows\n";
    }
    csv.close();
    m.add_output(csv.path());
    finish(m, sub, dir, out);
}

// ----------------------------------------------------------------- spacing

void cmd_spacing(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto params = model_from(o);
    params.require_normal_phase();
    const auto sectors = sectors_from(o.sectors, {"+1"});
    if (sectors.size() != 1) throw InvalidParameters("--sector: spacing takes a single basis");
    const auto dir = prepare_out_dir(o);
    Manifest m("spacing");
    fill_manifest_params(m, params, true);
    m.knobs()["delta"] = o.delta;
    m.knobs()["energy"] = o.energy;
    m.knobs()["width"] = o.width;
    m.knobs()["nu"] = o.nu;
    m.knobs()["bins"] = o.bins;
    m.knobs()["s_max"] = o.s_max;

    const auto r = solve(params, sectors.front(), o.delta);
    const auto levels = r.converged_energies();
    if (levels.size() < o.width)
        throw TooFewLevels("--width " + std::to_string(o.width) + " exceeds the " + std::to_string(levels.size()) +
                           " converged levels");
    // contiguous block of `width` levels centred as close to ε·j as possible
    const auto centre = static_cast<std::size_t>(
        std::lower_bound(levels.begin(), levels.end(), o.energy * params.j()) - levels.begin());
    const std::size_t start = std::min(centre > o.width / 2 ? centre - o.width / 2 : 0, levels.size() - o.width);
    const std::span<const double> block(levels.data() + start, o.width);

    const auto sample = unfold(block, o.nu, params.j());
    const auto hist = spacing_histogram(sample, o.bins, o.s_max);
    const double a2_goe = anderson_darling(sample.s, SpacingModel::GOE);
    const double a2_poisson = anderson_darling(sample.s, SpacingModel::Poisson);

    CsvWriter csv(dir / "histogram.csv", {"bin_left", "bin_right", "density", "goe_pdf_mid", "poisson_pdf_mid"});
    for (std::size_t b = 0; b < hist.density.size(); ++b)
        csv.cell(hist.bin_left[b]).cell(hist.bin_right[b]).cell(hist.density[b]).cell(hist.goe_pdf_mid[b])
            .cell(hist.poisson_pdf_mid[b]).end_row();
    csv.close();
    m.add_output(csv.path());

    auto& res = m.results();
    res["basis"] = basis_label(r.sector);
    res["window_mean_epsilon"] = sample.window_center;
    res["window_sigma_epsilon"] = sample.window_width;
    res["merged_levels"] = sample.merged;
    res["spacings"] = sample.s.size();
    res["a2_goe"] = a2_goe;
    res["a2_poisson"] = a2_poisson;
    res["accepts_goe"] = anderson_darling_accepts(a2_goe);
    res["accepts_poisson"] = anderson_darling_accepts(a2_poisson);
    res["clipped_fraction"] = hist.clipped_fraction;
    out << "spacing: <eps>=" << format_double(sample.window_center) << " sigma=" << format_double(sample.window_width)
        << " A2_GOE=" << format_double(a2_goe) << " A2_Poisson=" << format_double(a2_poisson) << '\n';
    if (hist.clip_warning)
        out << "warning: " << format_double(100.0 * hist.clipped_fraction) << "% of spacings exceed s_max\n";
    finish(m, sub, dir, out);
}

// ---------------------------------------------------------------- poincare

void cmd_poincare(const Options& o, const CLI::App& sub, std::ostream& out) {
    ModelParams params;
    params.omega = o.omega;
    params.omega0 = o.omega0;
    params.gamma = o.gamma;
    params.require_normal_phase();
    if (o.trajectories < 1) throw InvalidParameters("--trajectories must be >= 1");
    if (!(o.tmax > 0.0)) throw InvalidParameters("--tmax must be > 0");
    const auto dir = prepare_out_dir(o);
    Manifest m("poincare");
    fill_manifest_params(m, params, false);
    const IntegratorTolerance tol;
    auto& kn = m.knobs();
    kn["energy"] = o.energy;
    kn["tmax"] = o.tmax;
    kn["seed"] = o.seed;
    kn["trajectories"] = o.trajectories;
    kn["surface"] = "p = 0 crossed from p > 0 to p < 0 (q > 0)";
    kn["initial_conditions"] = "(q_plus(eps, 0, Q, P), 0, Q, P), (Q, P) uniform in the accessible disk";
    kn["tolerance_abs"] = tol.abs;
    kn["tolerance_rel"] = tol.rel;
    kn["max_relative_drift"] = tol.max_relative_drift;
    kn["crossing_tolerance"] = kCrossingTolerance;
    kn["max_crossings"] = kMaxCrossings;

    const auto starts = sample_shell(o.energy, {ShellGrid::Mode::Random, o.trajectories}, params, o.seed);
    CsvWriter csv(dir / "section.csv", {"trajectory_id", "crossing_index", "t", "Q", "P"});
    std::vector<SectionPoint> all;
    json exits = json::array();
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto run = poincare_section_run(starts[i], o.tmax, tol, params);
        for (std::size_t c = 0; c < run.points.size(); ++c) {
            const auto& p = run.points[c];
            csv.cell(i).cell(c).cell(p.t).cell(p.Q).cell(p.P).end_row();
        }
        all.insert(all.end(), run.points.begin(), run.points.end());
        if (run.domain_exit) exits.push_back({{"trajectory_id", i}, {"t_end", run.t_end}, {"reason", run.exit_reason}});
    }
    csv.close();
    m.add_output(csv.path());

    CsvWriter bnd(dir / "boundary.csv", {"theta_index", "Q", "P"});
    for (const auto& b : available_boundary(o.energy, params, o.n_theta)) bnd.cell(b.theta_index).cell(b.Q).cell(b.P).end_row();
    bnd.close();
    m.add_output(bnd.path());
    CsvWriter disk(dir / "disk_boundary.csv", {"theta_index", "Q", "P"});
    for (const auto& b : disk_boundary(o.n_theta)) disk.cell(b.theta_index).cell(b.Q).cell(b.P).end_row();
    disk.close();
    m.add_output(disk.path());

    const double radius = available_radius(o.energy, params);
    const double occupancy = section_occupancy(all, radius, o.cells);
    m.results()["crossings"] = all.size();
    m.results()["domain_exits"] = exits;
    m.results()["occupancy"] = occupancy;
    m.results()["occupancy_cells"] = o.cells;
    m.results()["accessible_radius"] = radius;
    out << "poincare: " << starts.size() << " trajectories, " << all.size() << " crossings, occupancy "
        << format_double(occupancy) << ", " << exits.size() << " domain exits\n";
    finish(m, sub, dir, out);
}

// -------------------------------------------------------- integrable-check

void cmd_integrable_check(const Options& o, const CLI::App& sub, std::ostream& out) {
    const auto params = model_from(o);
    params.require_normal_phase();
    const auto dir = prepare_out_dir(o);
    Manifest m("integrable-check");
    fill_manifest_params(m, params, true);
    m.knobs()["delta"] = o.check_delta;

    // Each sector's converged set is a prefix of that sector's spectrum, so
    // the union below the lowest sector top is a prefix of the full spectrum.
    std::vector<std::vector<double>> per_sector;
    double top = std::numeric_limits<double>::infinity();
    for (auto s : kAllSectors) {
        auto levels = solve(params, s, o.check_delta).converged_energies();
        if (levels.empty()) throw TooFewLevels("sector " + to_string(s) + " has no converged levels");
        top = std::min(top, levels.back());
        per_sector.push_back(std::move(levels));
    }
    std::vector<double> numeric;
    for (const auto& levels : per_sector)
        for (double e : levels)
            if (e <= top) numeric.push_back(e);
    std::sort(numeric.begin(), numeric.end());

    const auto report = compare_to_analytic(numeric, params);
    CsvWriter csv(dir / "integrable_check.csv", {"k", "numeric", "analytic", "rel_error"});
    for (std::size_t k = 0; k < numeric.size(); ++k)
        csv.cell(k).cell(report.numeric[k]).cell(report.analytic[k]).cell(report.rel_error[k]).end_row();
    csv.close();
    m.add_output(csv.path());
    m.results()["levels"] = numeric.size();
    m.results()["max_rel_deviation"] = report.max_rel_error;
    m.results()["worst_index"] = report.worst_index;
    m.results()["unmatched_analytic"] = report.unmatched_analytic;
    out << "max_rel_deviation=" << format_double(report.max_rel_error) << " levels=" << numeric.size()
        << " unmatched_analytic=" << report.unmatched_analytic << '\n';
    finish(m, sub, dir, out);
}

// ------------------------------------------------------------ option setup

void add_model(CLI::App* sub, Options& o, bool quantum, double* delta = nullptr) {
    sub->add_option("--omega", o.omega, "field frequency")->check(CLI::PositiveNumber);
    sub->add_option("--omega0", o.omega0, "atomic splitting")->check(CLI::NonNegativeNumber);
    sub->add_option("--gamma", o.gamma, "two-photon coupling (< omega/2)")->check(CLI::NonNegativeNumber);
    if (quantum) {
        sub->add_option("--j", o.j, "spin length, integer or half-integer");
        sub->add_option("--nmax", o.nmax, "photon truncation")->check(CLI::NonNegativeNumber);
        sub->add_option("--delta", delta ? *delta : o.delta, "convergence tail-weight tolerance")->check(CLI::PositiveNumber);
    }
    sub->add_option("--out-dir", o.out_dir, "output directory");
    sub->add_option("--config", o.config, "flat key=value settings file (flags win)");
}

// Reads --config for the chosen subcommand and splices its entries into argv
// ahead of the user's flags. Keys also given as flags are dropped so that
// flags always take precedence, including for list-valued options.
std::vector<std::string> merge_config(const CLI::App& app, const std::vector<std::string>& args) {
    if (args.size() < 2) return args;
    const CLI::App* sub = nullptr;
    std::size_t sub_pos = 0;
    for (std::size_t i = 1; i < args.size() && !sub; ++i)
        if (!args[i].starts_with("-")) {
            sub = app.get_subcommand_no_throw(args[i]);
            sub_pos = i;
        }
    if (!sub) return args;

    std::string path;
    std::set<std::string> given;
    for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
        if (!args[i].starts_with("--")) continue;
        const auto eq = args[i].find('=');
        const std::string name = args[i].substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        given.insert(name);
        if (name == "config") {
            if (eq != std::string::npos)
                path = args[i].substr(eq + 1);
            else if (i + 1 < args.size())
                path = args[i + 1];
        }
    }
    if (path.empty()) return args;
    if (!fs::is_regular_file(path)) throw InvalidParameters("--config: file not found: " + path);

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::Error& e) {
        throw InvalidParameters("--config: " + std::string(e.what()));
    }
    std::vector<std::string> injected;
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty())
            throw InvalidParameters("config key '" + item.fullname() + "': sections are not supported");
        const CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
        if (!opt || item.name == "config" || item.name == "help")
            throw InvalidParameters("config key '" + item.name + "' is not a " + sub->get_name() + " option");
        if (given.count(item.name)) continue;
        if (item.inputs.size() == 1) {
            injected.push_back("--" + item.name + "=" + item.inputs.front());
        } else {
            injected.push_back("--" + item.name);
            injected.insert(injected.end(), item.inputs.begin(), item.inputs.end());
        }
    }
    std::vector<std::string> merged(args.begin(), args.begin() + static_cast<long>(sub_pos) + 1);
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), args.begin() + static_cast<long>(sub_pos) + 1, args.end());
    return merged;
}

int exit_code(const Error& e) {
    switch (e.category()) {
    case ErrorCategory::Config: return kExitConfig;
    case ErrorCategory::Numerical: return kExitNumerical;
    case ErrorCategory::Domain: return kExitDomain;
    }
    return kExitNumerical;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Two-photon Dicke model: spectra, Peres lattices, level statistics, classical sections"};
    app.name(argc > 0 ? fs::path(argv[0]).filename().string() : "tpdicke");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto* spectrum = app.add_subcommand("spectrum", "converged eigenvalues per parity sector");
    add_model(spectrum, o, true);
    spectrum->add_option("--sector", o.sectors, "+1, -1, +i, -i, all or full (default all)");
    spectrum->add_option("--epsilon-perturb", o.epsilon_perturb, "J_x perturbation; nonzero uses the full basis");

    auto* peres = app.add_subcommand("peres", "Peres lattices of selected observables");
    add_model(peres, o, true);
    peres->add_option("--op", o.ops, "observables")->required()->check(CLI::IsMember(kOpNames));
    peres->add_option("--sector", o.sectors, "basis when unperturbed (default +1)");
    peres->add_option("--epsilon-perturb", o.epsilon_perturb, "J_x perturbation; nonzero uses the full basis");
    peres->add_flag("--overlay", o.overlay, "also write omega0 = 0 analytic curves");
    peres->add_option("--nc-max", o.nc_max, "largest n_c in the overlay")->check(CLI::NonNegativeNumber);

    auto* ratio = app.add_subcommand("ratio", "windowed mean spectral ratio");
    add_model(ratio, o, true);
    ratio->add_option("--sector", o.sectors, "sectors to analyse (default all, averaged)");
    ratio->add_option("--window", o.window, "levels per window")->check(CLI::PositiveNumber);
    ratio->add_option("--stride", o.stride, "window advance")->check(CLI::PositiveNumber);

    auto* spacing = app.add_subcommand("spacing", "unfolded spacing histogram and Anderson-Darling tests");
    add_model(spacing, o, true);
    spacing->add_option("--sector", o.sectors, "basis (default +1)");
    spacing->add_option("--energy", o.energy, "window centre in epsilon = E/j")->required();
    spacing->add_option("--width", o.width, "levels in the window")->check(CLI::PositiveNumber);
    spacing->add_option("--nu", o.nu, "unfolding half-window")->check(CLI::PositiveNumber);
    spacing->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);
    spacing->add_option("--s-max", o.s_max, "histogram range")->check(CLI::PositiveNumber);

    auto* poincare = app.add_subcommand("poincare", "classical Poincare sections on an energy shell");
    add_model(poincare, o, false);
    poincare->add_option("--energy", o.energy, "shell energy epsilon")->required();
    poincare->add_option("--tmax", o.tmax, "integration time");
    poincare->add_option("--seed", o.seed, "initial-condition seed");
    poincare->add_option("--trajectories", o.trajectories, "number of trajectories");
    poincare->add_option("--n-theta", o.n_theta, "rays for the boundary contours")->check(CLI::PositiveNumber);
    poincare->add_option("--cells", o.cells, "occupancy grid cells per side")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("integrable-check", "numeric vs analytic omega0 = 0 spectrum");
    add_model(check, o, true, &o.check_delta);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = merge_config(app, args);
        std::vector<const char*> cargs;
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    }

    try {
        if (spectrum->parsed()) cmd_spectrum(o, *spectrum, out);
        else if (peres->parsed()) cmd_peres(o, *peres, out);
        else if (ratio->parsed()) cmd_ratio(o, *ratio, out);
        else if (spacing->parsed()) cmd_spacing(o, *spacing, out);
        else if (poincare->parsed()) cmd_poincare(o, *poincare, out);
        else if (check->parsed()) cmd_integrable_check(o, *check, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace tpdicke::cli
