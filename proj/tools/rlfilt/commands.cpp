#include "commands.hpp"

#include <rlf/calib.hpp>
#include <rlf/coupling.hpp>
#include <rlf/delay.hpp>
#include <rlf/error.hpp>
#include <rlf/json_io.hpp>
#include <rlf/metrics.hpp>
#include <rlf/mna.hpp>
#include <rlf/neumann.hpp>
#include <rlf/optimize.hpp>
#include <rlf/synth.hpp>
#include <rlf/tolerance.hpp>
#include <rlf/touchstone.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rlfcli {

namespace {

constexpr double tau = 2.0 * std::numbers::pi;

struct GridFlags {
    double start = 0.0;
    double stop = 0.0;
    std::size_t points = 401;
    bool log = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--start", start, "First frequency, Hz");
        cmd->add_option("--stop", stop, "Last frequency, Hz");
        cmd->add_option("--points", points, "Number of grid points");
        cmd->add_flag("--log", log, "Logarithmic spacing");
    }

    [[nodiscard]] rlf::FrequencyGrid grid(double default_start = 0.0, double default_stop = 0.0) const {
        const double a = start > 0.0 ? start : default_start;
        const double b = stop > 0.0 ? stop : default_stop;
        if (!(a > 0.0) || !(b > a)) {
            throw UsageError(fmt::format("grid needs --stop > --start > 0 (got {} and {})", a, b));
        }
        if (points < 2) {
            throw UsageError("grid needs --points >= 2");
        }
        return log ? rlf::FrequencyGrid::logarithmic(a, b, points) : rlf::FrequencyGrid::linear(a, b, points);
    }
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    return rlf::read_text_file(path);
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    rlf::write_text_file(path, text);
}

template <typename F>
auto with_file_context(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const rlf::ParseError& e) {
        throw rlf::ParseError(fmt::format("{}: {}", path == "-" ? "<stdin>" : path, e.what()));
    }
}

rlf::Netlist load_netlist(const std::string& path) {
    return with_file_context(path, [&] { return rlf::netlist_from_json(rlf::parse_json(read_input(path))); });
}

bool is_touchstone(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) {
        return false;
    }
    std::string ext = path.substr(dot + 1);
    for (auto& c : ext) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return ext.size() >= 3 && ext.front() == 's' && ext.back() == 'p';
}

std::vector<rlf::SParamSelection> all_entries(std::size_t ports) {
    std::vector<rlf::SParamSelection> sel;
    for (std::size_t from = 0; from < ports; ++from) {
        for (std::size_t to = 0; to < ports; ++to) {
            sel.push_back({to, from});
        }
    }
    return sel;
}

std::string fmt_g(double x) { return fmt::format("{:.17g}", x); }

// ---------------------------------------------------------------- synth

void add_synth(CLI::App& app, Context&, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("synth", "Synthesize a reflectionless filter netlist");
    struct Opts {
        std::string topology = "bandpass";
        double fp1 = 0.0, fp2 = 0.0, fp = 0.0, z0 = 50.0;
        std::string out, csv;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--topology", o->topology, "bandpass or lowpass")->check(CLI::IsMember({"bandpass", "lowpass"}));
    cmd->add_option("--fp1", o->fp1, "Lower transmission zero, Hz");
    cmd->add_option("--fp2", o->fp2, "Upper transmission zero, Hz");
    cmd->add_option("--fp", o->fp, "Low-pass cutoff, Hz");
    cmd->add_option("--z0", o->z0, "System impedance, ohm");
    cmd->add_option("-o,--output", o->out, "Netlist JSON output (default stdout)");
    cmd->add_option("--csv", o->csv, "Ideal response CSV output");
    o->grid.add_to(cmd);
    cmd->callback([o, &run] {
        run = [o] {
            rlf::Netlist n;
            double lo = 0.0, hi = 0.0;
            if (o->topology == "bandpass") {
                if (o->fp1 <= 0.0 || o->fp2 <= 0.0) {
                    throw UsageError("synth: bandpass needs --fp1 and --fp2");
                }
                n = rlf::build_bandpass_netlist(rlf::synth_bandpass(rlf::BandpassSpec::from_hz(o->fp1, o->fp2, o->z0)));
                lo = o->fp1 / 10.0;
                hi = o->fp2 * 3.0;
            } else {
                if (o->fp <= 0.0) {
                    throw UsageError("synth: lowpass needs --fp");
                }
                n = rlf::build_lowpass_netlist(rlf::synth_lowpass(tau * o->fp, o->z0));
                lo = o->fp / 100.0;
                hi = o->fp * 100.0;
            }
            write_output(o->out, rlf::dump(rlf::to_json(n)));
            if (!o->csv.empty()) {
                GridFlags g = o->grid;
                if (g.start <= 0.0 && g.stop <= 0.0) {
                    g.log = true;
                }
                const auto resp = rlf::evaluate_netlist(n, g.grid(lo, hi));
                write_output(o->csv, rlf::write_response_csv(resp, {{0, 0}, {1, 0}}, {true, true}));
            }
        };
    });
}

// -------------------------------------------------------------- analyze

void add_analyze(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("analyze", "Evaluate a netlist or summarize a Touchstone two-port");
    struct Opts {
        std::string input, out, touchstone_out, summary_json;
        bool summary = false, phase = false;
        double band_lo = 0.0, band_hi = 0.0;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Netlist JSON, or a .sNp Touchstone file ('-' reads JSON from stdin)")->required();
    cmd->add_option("-o,--output", o->out, "Response CSV output (default stdout)");
    cmd->add_option("--touchstone", o->touchstone_out, "Also write the S-parameters as Touchstone");
    cmd->add_flag("--phase", o->phase, "Add phase columns");
    cmd->add_flag("--summary", o->summary, "Print the pass-band summary instead of the CSV");
    cmd->add_option("--summary-json", o->summary_json, "Write the pass-band summary as JSON");
    cmd->add_option("--band-lo", o->band_lo, "In-band figure lower edge, Hz (default: 3 dB band)");
    cmd->add_option("--band-hi", o->band_hi, "In-band figure upper edge, Hz");
    o->grid.add_to(cmd);
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            std::optional<rlf::NetworkData> net;
            if (is_touchstone(o->input)) {
                net = rlf::read_touchstone(o->input).network;
            } else {
                const auto n = load_netlist(o->input);
                net = rlf::evaluate_netlist(n, o->grid.grid(), rlf::EvalOptions{ctx.parallelism()});
            }
            if (!o->touchstone_out.empty()) {
                rlf::save_touchstone(o->touchstone_out, *net, {rlf::FrequencyUnit::Hz, rlf::DataFormat::RI});
            }
            const bool want_summary = o->summary || !o->summary_json.empty();
            if (want_summary) {
                rlf::SummaryOptions so;
                if (o->band_lo > 0.0 || o->band_hi > 0.0) {
                    if (!(o->band_hi > o->band_lo)) {
                        throw UsageError("analyze: --band-hi must exceed --band-lo");
                    }
                    so.in_band = rlf::Band{o->band_lo, o->band_hi};
                }
                const auto s = rlf::summarize_response(*net, so);
                if (!o->summary_json.empty()) {
                    rlf::Json j{{"center_hz", s.center_hz},
                                {"center_geometric_hz", s.center_geometric_hz},
                                {"bandwidth_3db_hz", s.bandwidth_3db_hz},
                                {"band_lo_hz", s.band_lo_hz},
                                {"band_hi_hz", s.band_hi_hz},
                                {"min_insertion_loss_db", s.min_insertion_loss_db},
                                {"max_in_band_insertion_loss_db", s.max_in_band_insertion_loss_db},
                                {"min_in_band_return_loss_db", s.min_in_band_return_loss_db},
                                {"min_broadband_return_loss_db", s.min_broadband_return_loss_db}};
                    write_output(o->summary_json, rlf::dump(j));
                }
                if (o->summary) {
                    std::string text;
                    text += fmt::format("center_hz,{}\n", fmt_g(s.center_hz));
                    text += fmt::format("center_geometric_hz,{}\n", fmt_g(s.center_geometric_hz));
                    text += fmt::format("bandwidth_3db_hz,{}\n", fmt_g(s.bandwidth_3db_hz));
                    text += fmt::format("band_lo_hz,{}\n", fmt_g(s.band_lo_hz));
                    text += fmt::format("band_hi_hz,{}\n", fmt_g(s.band_hi_hz));
                    text += fmt::format("min_insertion_loss_db,{}\n", fmt_g(s.min_insertion_loss_db));
                    text += fmt::format("max_in_band_insertion_loss_db,{}\n", fmt_g(s.max_in_band_insertion_loss_db));
                    text += fmt::format("min_in_band_return_loss_db,{}\n", fmt_g(s.min_in_band_return_loss_db));
                    text += fmt::format("min_broadband_return_loss_db,{}\n", fmt_g(s.min_broadband_return_loss_db));
                    write_output("", "quantity,value\n" + text);
                }
            }
            if (!want_summary || !o->out.empty()) {
                write_output(o->out, rlf::write_response_csv(*net, all_entries(net->ports()), {true, o->phase}));
            }
        };
    });
}

// ---------------------------------------------------------------- delay

void add_delay(CLI::App& app, Context&, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("delay", "Reflection of the low-pass with a delayed symmetry plane");
    struct Opts {
        double fp = 0.0, z0 = 50.0, zl = 50.0, theta = 0.0, ref_hz = 0.0;
        std::string out;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--fp", o->fp, "Low-pass cutoff, Hz")->required();
    cmd->add_option("--z0", o->z0, "System impedance, ohm");
    cmd->add_option("--zl", o->zl, "Symmetry-plane line impedance, ohm");
    cmd->add_option("--theta", o->theta, "Line electrical length at the reference frequency, rad");
    cmd->add_option("--ref-hz", o->ref_hz, "Reference frequency for --theta (default --fp)");
    cmd->add_option("-o,--output", o->out, "CSV output (default stdout)");
    o->grid.add_to(cmd);
    cmd->callback([o, &run] {
        run = [o] {
            rlf::DelayModelInput in{rlf::synth_lowpass(tau * o->fp, o->z0), o->zl, o->theta,
                                    o->ref_hz > 0.0 ? o->ref_hz : o->fp};
            const auto grid = o->grid.grid(o->fp / 100.0, o->fp * 4.0);
            const auto g = rlf::delay_reflection(in, grid);
            rlf::CsvTable t{{"freq_hz", "gamma_re", "gamma_im", "gamma_db"}, {}};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                t.rows.push_back({grid[k], g[k].real(), g[k].imag(), rlf::to_db(g[k])});
            }
            write_output(o->out, rlf::write_csv(t));
        };
    });
}

// --------------------------------------------------------------- mutual

void add_mutual(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("mutual", "Mutual inductance matrix of an inductor layout");
    struct Opts {
        std::string layout, out;
        std::size_t refine = 1;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("layout", o->layout, "Layout JSON ('-' for stdin)")->required();
    cmd->add_option("-o,--output", o->out, "Mutual matrix JSON output (default stdout)");
    cmd->add_option("--refine", o->refine, "Split every path segment into this many pieces")->check(CLI::PositiveNumber);
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            const auto layout =
                with_file_context(o->layout, [&] { return rlf::layout_from_json(rlf::parse_json(read_input(o->layout))); });
            std::vector<std::string> labels;
            std::vector<rlf::Polyline3D> paths;
            for (const auto& e : layout.entries) {
                labels.push_back(e.inductor);
                paths.push_back(e.path.refined(o->refine));
            }
            write_output(o->out, rlf::dump(rlf::to_json(rlf::mutual_matrix(labels, paths, layout.options, ctx.parallelism()))));
        };
    });
}

// ------------------------------------------------------------- windings

void add_windings(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("windings", "Exhaustive winding-direction search");
    struct Opts {
        std::string netlist, matrix, out, best_out;
        double threshold = 0.0, band_lo = 0.0, band_hi = 0.0;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("netlist", o->netlist, "Netlist JSON")->required();
    cmd->add_option("matrix", o->matrix, "Mutual matrix JSON")->required();
    cmd->add_option("-o,--output", o->out, "Sign table CSV (default stdout)");
    cmd->add_option("--best", o->best_out, "Write the best coupled netlist JSON here");
    cmd->add_option("--threshold", o->threshold, "Ignore couplings with |M| below this, H");
    cmd->add_option("--band-lo", o->band_lo, "Objective band lower edge, Hz (default: 3 dB band)");
    cmd->add_option("--band-hi", o->band_hi, "Objective band upper edge, Hz");
    o->grid.add_to(cmd);
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            if (o->netlist == "-" && o->matrix == "-") {
                throw UsageError("windings: only one input can come from stdin");
            }
            const auto n = load_netlist(o->netlist);
            const auto mm = with_file_context(
                o->matrix, [&] { return rlf::mutual_matrix_from_json(rlf::parse_json(read_input(o->matrix))); });
            rlf::WindingSearchOptions opt;
            opt.threshold = o->threshold;
            opt.parallelism = ctx.parallelism();
            if (o->band_lo > 0.0 || o->band_hi > 0.0) {
                opt.objective_band = rlf::Band{o->band_lo, o->band_hi};
            }
            const auto r = rlf::winding_search(n, mm, o->grid.grid(), opt);
            rlf::CsvTable t;
            t.header.push_back("pattern");
            for (const auto& name : r.inductors) {
                t.header.push_back(name);
            }
            t.header.push_back("max_s11");
            t.header.push_back("max_s11_db");
            for (std::size_t p = 0; p < r.table.size(); ++p) {
                std::vector<double> row{static_cast<double>(p)};
                for (int s : r.table[p].signs) {
                    row.push_back(s);
                }
                row.push_back(r.table[p].objective);
                row.push_back(rlf::to_db(r.table[p].objective));
                t.rows.push_back(std::move(row));
            }
            write_output(o->out, rlf::write_csv(t));
            std::fprintf(stderr, "best pattern %zu: max in-band |S11| = %.6g dB; worst pattern %zu: %.6g dB\n",
                         r.best_index, rlf::to_db(r.best().objective), r.worst_index, rlf::to_db(r.worst().objective));
            if (!o->best_out.empty()) {
                write_output(o->best_out,
                             rlf::dump(rlf::to_json(rlf::apply_mutual_couplings(n, mm, r.best().signs, o->threshold))));
            }
        };
    });
}

// ------------------------------------------------------------ tolerance

void add_tolerance(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("tolerance", "Monte Carlo component tolerance analysis");
    struct Opts {
        std::string netlist, out;
        double fraction = -1.0, l_fraction = -1.0, c_fraction = -1.0, independent = 0.0, resistor = 0.0;
        double band_lo = 0.0, band_hi = 0.0;
        std::size_t trials = 1000;
        std::uint64_t seed = 1;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("netlist", o->netlist, "Netlist JSON ('-' for stdin)")->required();
    cmd->add_option("-o,--output", o->out, "Quantile CSV (default stdout)");
    cmd->add_option("--fraction", o->fraction, "Common-mode spread for both L and C (e.g. 0.1 = +/-10 %)");
    cmd->add_option("--l-fraction", o->l_fraction, "Common-mode inductor spread");
    cmd->add_option("--c-fraction", o->c_fraction, "Common-mode capacitor spread");
    cmd->add_option("--independent", o->independent, "Per-element L and C spread");
    cmd->add_option("--resistor-fraction", o->resistor, "Per-resistor spread");
    cmd->add_option("--trials", o->trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o->seed, "RNG seed");
    cmd->add_option("--band-lo", o->band_lo, "Report worst return loss from this frequency, Hz");
    cmd->add_option("--band-hi", o->band_hi, "... up to this frequency, Hz");
    o->grid.add_to(cmd);
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            rlf::ToleranceSpec spec;
            const double common = std::max(o->fraction, 0.0);
            spec.common_inductor_fraction = o->l_fraction >= 0.0 ? o->l_fraction : common;
            spec.common_capacitor_fraction = o->c_fraction >= 0.0 ? o->c_fraction : common;
            spec.independent_fraction = o->independent;
            spec.resistor_fraction = o->resistor;
            spec.trials = o->trials;
            spec.seed = o->seed;
            const auto n = load_netlist(o->netlist);
            const auto s = rlf::tolerance_mc(n, spec, o->grid.grid(), ctx.parallelism());
            rlf::CsvTable t{{"freq_hz", "s11_nominal", "s11_q05", "s11_q50", "s11_q95", "s11_max", "s21_nominal",
                             "s21_q05", "s21_q50", "s21_q95", "s21_min"},
                            {}};
            for (std::size_t k = 0; k < s.grid.size(); ++k) {
                t.rows.push_back({s.grid[k], s.s11_nominal[k], s.s11_quantiles[0][k], s.s11_quantiles[1][k],
                                  s.s11_quantiles[2][k], s.s11_max[k], s.s21_nominal[k], s.s21_quantiles[0][k],
                                  s.s21_quantiles[1][k], s.s21_quantiles[2][k], s.s21_min[k]});
            }
            write_output(o->out, rlf::write_csv(t));
            if (o->band_hi > o->band_lo && o->band_lo > 0.0) {
                std::fprintf(stderr, "worst in-band return loss: %.4f dB over %zu trials\n",
                             s.worst_return_loss_db(rlf::Band{o->band_lo, o->band_hi}), s.trials);
            }
        };
    });
}

// ---------------------------------------------------------------- calmc

void add_calmc(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("calmc", "Monte Carlo of the switched-standard one-port calibration");
    struct Opts {
        std::string out, histogram;
        std::vector<std::string> paths;
        bool term2 = false;
        double term2_phase = 0.0;
        double dut_rl = 20.0, dut_phase = 0.0;
        double cable_length = 0.3, cable_z0 = 55.0, cable_loss = 0.3;
        rlf::UncertaintyConfig cfg;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-o,--output", o->out, "Quantile CSV (default stdout)");
    cmd->add_option("--histogram", o->histogram, "Heat-map CSV (frequency x dB bins)");
    cmd->add_option("--path", o->paths, "Switch-path .s2p per standard then the DUT (repeatable)");
    cmd->add_flag("--term2", o->term2, "Add the 6 dB partial reflector as a fourth standard");
    cmd->add_option("--term2-phase", o->term2_phase, "Phase of the partial reflector, deg");
    cmd->add_option("--dut-rl", o->dut_rl, "True DUT return loss, dB");
    cmd->add_option("--dut-phase", o->dut_phase, "True DUT reflection phase, deg");
    cmd->add_option("--cable-length", o->cable_length, "Nominal path length when no --path is given, m");
    cmd->add_option("--cable-z0", o->cable_z0, "Nominal path line impedance, ohm");
    cmd->add_option("--cable-loss", o->cable_loss, "Nominal path loss at 1 GHz, dB");
    cmd->add_option("--trials", o->cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o->cfg.seed, "RNG seed");
    cmd->add_option("--noise-db", o->cfg.vna_noise_db, "VNA magnitude error span, dB");
    cmd->add_option("--phase-deg", o->cfg.phase_deg, "Path phase error span, deg");
    cmd->add_option("--rl-db", o->cfg.return_loss_db, "Path return-loss spread, dB");
    cmd->add_option("--il-db", o->cfg.insertion_loss_db, "Path insertion-loss spread, dB");
    cmd->add_option("--length-fraction", o->cfg.electrical_length_fraction,
                    "Path phase drift as a fraction of its electrical length");
    cmd->add_option("--threshold", o->cfg.crossover_threshold, "Error magnitude for the crossover report");
    o->grid.add_to(cmd);
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            std::vector<rlf::NetworkData> paths;
            std::optional<rlf::FrequencyGrid> grid;
            for (const auto& p : o->paths) {
                paths.push_back(rlf::read_touchstone(p).network);
            }
            if (!paths.empty()) {
                grid = paths.front().grid();
            } else {
                grid = o->grid.grid(1e9, 20e9);
            }
            std::vector<rlf::CalStandard> standards{rlf::open_standard(*grid), rlf::short_standard(*grid),
                                                    rlf::load_standard(*grid)};
            if (o->term2) {
                standards.push_back(rlf::term2_standard(*grid, o->term2_phase));
            }
            if (paths.empty()) {
                rlf::CablePath c;
                c.length_m = o->cable_length;
                c.line_z0 = o->cable_z0;
                c.loss_db_at_1ghz = o->cable_loss;
                paths.assign(standards.size() + 1, rlf::cable_path(*grid, c));
            }
            const rlf::ComplexSeries dut(grid->size(), std::polar(std::pow(10.0, -o->dut_rl / 20.0),
                                                                   o->dut_phase * std::numbers::pi / 180.0));
            const auto r = rlf::calibration_mc(standards, dut, paths, o->cfg, ctx.parallelism());
            rlf::CsvTable t{{"freq_hz", "true_db", "q05_db", "q50_db", "q95_db", "error_q50", "error_q95", "error_max"}, {}};
            for (std::size_t k = 0; k < grid->size(); ++k) {
                t.rows.push_back({(*grid)[k], rlf::to_db(r.dut_true_mag[k]), rlf::to_db(r.quantiles[0][k]),
                                  rlf::to_db(r.quantiles[1][k]), rlf::to_db(r.quantiles[2][k]), r.error_quantiles[1][k],
                                  r.error_quantiles[2][k], r.error_max[k]});
            }
            write_output(o->out, rlf::write_csv(t));
            if (!o->histogram.empty()) {
                rlf::CsvTable h;
                h.header.push_back("freq_hz");
                for (std::size_t b = 0; b + 1 < r.bin_edges_db.size(); ++b) {
                    h.header.push_back(fmt::format("bin_{}_{}", fmt_g(r.bin_edges_db[b]), fmt_g(r.bin_edges_db[b + 1])));
                }
                for (std::size_t k = 0; k < grid->size(); ++k) {
                    std::vector<double> row{(*grid)[k]};
                    for (auto c : r.histogram[k]) {
                        row.push_back(static_cast<double>(c));
                    }
                    h.rows.push_back(std::move(row));
                }
                write_output(o->histogram, rlf::write_csv(h));
            }
            if (r.crossover_hz) {
                std::fprintf(stderr, "95%% error exceeds %.4g from %.6g Hz\n", o->cfg.crossover_threshold, *r.crossover_hz);
            } else {
                std::fprintf(stderr, "95%% error stays below %.4g on the whole grid\n", o->cfg.crossover_threshold);
            }
        };
    });
}

// ------------------------------------------------------------ calibrate

void add_calibrate(CLI::App& app, Context&, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("calibrate", "Correct a measured one-port from measured open/short/load");
    struct Opts {
        std::string open, short_, load, term2, dut, out, touchstone_out;
        double term2_phase = 0.0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--open", o->open, "Measured open, .s1p")->required();
    cmd->add_option("--short", o->short_, "Measured short, .s1p")->required();
    cmd->add_option("--load", o->load, "Measured load, .s1p")->required();
    cmd->add_option("--term2", o->term2, "Measured 6 dB partial reflector, .s1p");
    cmd->add_option("--term2-phase", o->term2_phase, "Phase of the partial reflector, deg");
    cmd->add_option("--dut", o->dut, "Measured DUT, .s1p")->required();
    cmd->add_option("-o,--output", o->out, "Corrected CSV (default stdout)");
    cmd->add_option("--touchstone", o->touchstone_out, "Also write the corrected DUT as .s1p");
    cmd->callback([o, &run] {
        run = [o] {
            auto load1 = [](const std::string& p) {
                auto n = rlf::read_touchstone(p).network;
                if (n.ports() != 1) {
                    throw rlf::InvalidArgument(fmt::format("{} is not a one-port", p));
                }
                return n;
            };
            const auto dut = load1(o->dut);
            const auto& grid = dut.grid();
            std::vector<rlf::CalStandard> standards{rlf::open_standard(grid), rlf::short_standard(grid),
                                                    rlf::load_standard(grid)};
            std::vector<rlf::ComplexSeries> measured;
            for (const auto* p : {&o->open, &o->short_, &o->load}) {
                const auto m = load1(*p);
                if (!m.grid().matches(grid)) {
                    throw rlf::InvalidArgument(fmt::format("{} is not on the DUT frequency grid", *p));
                }
                measured.push_back(m.trace(0, 0));
            }
            if (!o->term2.empty()) {
                const auto m = load1(o->term2);
                if (!m.grid().matches(grid)) {
                    throw rlf::InvalidArgument(fmt::format("{} is not on the DUT frequency grid", o->term2));
                }
                standards.push_back(rlf::term2_standard(grid, o->term2_phase));
                measured.push_back(m.trace(0, 0));
            }
            const auto et = rlf::solve_error_terms(standards, measured, grid.points());
            const auto g = rlf::apply_correction(et, dut.trace(0, 0), grid.points());
            rlf::CsvTable t{{"freq_hz", "gamma_re", "gamma_im", "gamma_db", "condition"}, {}};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                t.rows.push_back({grid[k], g[k].real(), g[k].imag(), rlf::to_db(g[k]), et.condition[k]});
            }
            write_output(o->out, rlf::write_csv(t));
            if (!o->touchstone_out.empty()) {
                rlf::save_touchstone(o->touchstone_out, rlf::one_port(grid, g, dut.z0(0)),
                                     {rlf::FrequencyUnit::Hz, rlf::DataFormat::RI});
            }
        };
    });
}

// ------------------------------------------------------------- optimize

void add_optimize(CLI::App& app, Context& ctx, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("optimize", "Tune component values against frequency-domain targets");
    struct Opts {
        std::string problem, out, netlist_out, trace;
        std::size_t max_iterations = 0, restarts = 0;
        std::optional<std::uint64_t> seed;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("problem", o->problem, "Problem JSON ('-' for stdin)")->required();
    cmd->add_option("-o,--output", o->out, "Result JSON (default stdout)");
    cmd->add_option("--netlist", o->netlist_out, "Also write the tuned netlist JSON");
    cmd->add_option("--trace", o->trace, "Objective trace CSV");
    cmd->add_option("--max-iterations", o->max_iterations, "Override the solver iteration cap");
    cmd->add_option("--restarts", o->restarts, "Extra seeded random starts");
    cmd->add_option("--seed", o->seed, "Restart seed");
    cmd->callback([o, &ctx, &run] {
        run = [o, &ctx] {
            auto doc = with_file_context(o->problem,
                                         [&] { return rlf::problem_from_json(rlf::parse_json(read_input(o->problem))); });
            if (o->max_iterations > 0) {
                doc.solver.max_iterations = o->max_iterations;
            }
            if (o->restarts > 0) {
                doc.solver.restarts = o->restarts;
            }
            if (o->seed) {
                doc.solver.seed = *o->seed;
            }
            doc.solver.parallelism = ctx.parallelism();
            const auto r = rlf::solve(doc.problem, doc.solver);
            write_output(o->out, rlf::dump(rlf::result_to_json(doc.problem, r)));
            if (!o->netlist_out.empty()) {
                write_output(o->netlist_out, rlf::dump(rlf::to_json(doc.problem.apply(r.p))));
            }
            if (!o->trace.empty()) {
                rlf::CsvTable t{{"iteration", "objective"}, {}};
                for (std::size_t i = 0; i < r.trace.size(); ++i) {
                    t.rows.push_back({static_cast<double>(i), r.trace[i]});
                }
                write_output(o->trace, rlf::write_csv(t));
            }
            std::fprintf(stderr, "%s after %zu iterations, objective %.6g, targets %s\n", rlf::to_string(r.status),
                         r.iterations, r.objective, r.targets_met ? "met" : "not met");
        };
    });
}

// ---------------------------------------------------------------- noise

void add_noise(CLI::App& app, Context&, std::function<void()>& run) {
    auto* cmd = app.add_subcommand("noise", "Transfer from each resistor (as a matched port) to the filter ports");
    struct Opts {
        std::string netlist, out;
        GridFlags grid;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("netlist", o->netlist, "Netlist JSON ('-' for stdin)")->required();
    cmd->add_option("-o,--output", o->out, "CSV output (default stdout)");
    o->grid.add_to(cmd);
    cmd->callback([o, &run] {
        run = [o] {
            const auto n = load_netlist(o->netlist);
            const auto t = rlf::resistor_noise_transfer(n, o->grid.grid());
            std::vector<rlf::SParamSelection> sel;
            const std::size_t ext = n.ports().size();
            for (std::size_t r = ext; r < t.ports(); ++r) {
                for (std::size_t p = 0; p < ext; ++p) {
                    sel.push_back({p, r});
                }
            }
            write_output(o->out, rlf::write_response_csv(t, sel));
        };
    });
}

}  // namespace

void register_commands(CLI::App& app, Context& ctx, std::function<void()>& run) {
    add_synth(app, ctx, run);
    add_analyze(app, ctx, run);
    add_delay(app, ctx, run);
    add_mutual(app, ctx, run);
    add_windings(app, ctx, run);
    add_tolerance(app, ctx, run);
    add_calmc(app, ctx, run);
    add_calibrate(app, ctx, run);
    add_optimize(app, ctx, run);
    add_noise(app, ctx, run);
}

}  // namespace rlfcli
