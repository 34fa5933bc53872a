// jbtlab: batch front end for the JB*-triple laboratory.
//
// Exit codes: 0 success, 1 property violation or numeric failure,
// 2 usage/input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <jbtlab/jbtlab.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

using namespace jbt;
using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string factor;
    std::uint64_t seed = 12345;
    double eq_tol = 1e-9;
    double struct_tol = 1e-7;
    std::string format = "json";
    int jobs = 1;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("JBT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ParseError("JBT_SEED must be an unsigned integer");
        }
    }
    return 12345;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_factor = true) {
    if (with_factor) {
        cmd->add_option("--factor", opts.factor,
                        "factor descriptor (rect:KxN, asym:N, sym:N, spin:D, sum:...)")
            ->required();
    }
    cmd->add_option("--seed", opts.seed, "64-bit RNG seed (default: JBT_SEED or 12345)");
    cmd->add_option("--eq-tol", opts.eq_tol, "equality tolerance");
    cmd->add_option("--struct-tol", opts.struct_tol, "structural predicate tolerance");
    cmd->add_option("--format", opts.format, "output format: json | csv | md")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    cmd->add_option("--jobs", opts.jobs, "worker threads for campaigns")
        ->check(CLI::PositiveNumber);
}

Tolerance tol_of(const CommonOpts& o) {
    Tolerance t{o.eq_tol, o.struct_tol};
    t.validate();
    return t;
}

json config_json(const CommonOpts& o) {
    json j;
    j["factor"] = o.factor;
    j["seed"] = o.seed;
    j["eq_tol"] = o.eq_tol;
    j["struct_tol"] = o.struct_tol;
    return j;
}

/// A flat table view of a report for the csv/md writers.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string fmt_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void emit(const json& full, const Table& table, const std::string& format) {
    if (format == "json") {
        std::cout << full.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        for (size_t i = 0; i < table.columns.size(); ++i) {
            std::cout << (i ? "," : "") << table.columns[i];
        }
        std::cout << "\n";
        for (const auto& row : table.rows) {
            for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
            std::cout << "\n";
        }
        return;
    }
    // markdown table
    auto line = [&](const std::vector<std::string>& cells) {
        std::cout << "|";
        for (const auto& c : cells) std::cout << " " << c << " |";
        std::cout << "\n";
    };
    line(table.columns);
    std::vector<std::string> rule(table.columns.size(), "---");
    line(rule);
    for (const auto& row : table.rows) line(row);
}

Element load_or_sample_element(const CommonOpts& opts, const std::string& file,
                               const std::string& sample_kind, std::uint64_t stream) {
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw ParseError("cannot open '" + file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return deserialize(buf.str());
    }
    const Factor f = Factor::parse(opts.factor);
    if (sample_kind == "minimal") return sample_minimal_tripotent(f, Rng::derive(opts.seed, stream));
    if (sample_kind == "sphere") return sample_sphere_point(f, Rng::derive(opts.seed, stream));
    return sample_element(f, Rng::derive(opts.seed, stream));
}

json element_json(const Element& x) { return json::parse(serialize(x)); }

/// Deterministic index-sharded parallel map: slot i is written by exactly one
/// worker, so the merged result does not depend on the interleaving.
template <typename Fn>
void parallel_for(long n, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n < 2 * jobs) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (n + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
        const long lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo < hi) {
            pool.emplace_back([lo, hi, &fn] {
                for (long i = lo; i < hi; ++i) fn(i);
            });
        }
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// axioms

int run_axioms(const CommonOpts& opts, long n) {
    const Factor f = Factor::parse(opts.factor);
    const Tolerance tol = tol_of(opts);

    struct Axiom {
        std::string name;
        double bound;
        std::vector<double> residuals;
    };
    std::vector<Axiom> axioms = {
        {"jb3_norm_identity", tol.eq_tol * 2, {}},
        {"middle_conjugate_linearity", tol.eq_tol * 10, {}},
        {"jb1_jordan_identity", tol.struct_tol, {}},
        {"orthogonal_m_orthogonality", tol.eq_tol * 10, {}},
    };
    for (auto& a : axioms) a.residuals.assign(static_cast<size_t>(n), 0.0);

    parallel_for(n, opts.jobs, [&](long i) {
        const std::uint64_t s = Rng::derive(opts.seed, static_cast<std::uint64_t>(i));
        auto normalized = [&](std::uint64_t k) {
            Element x = sample_element(f, Rng::derive(s, k));
            return x * Complex(1.0 / std::max(1.0, norm(x)), 0.0);
        };
        const Element a = normalized(0), b = normalized(1), c = normalized(2), d = normalized(3);

        const double na = norm(a);
        axioms[0].residuals[static_cast<size_t>(i)] =
            std::abs(norm(triple_product(a, a, a)) - na * na * na) / (1.0 + na * na * na);

        const Complex lambda(0.7, -0.4);
        axioms[1].residuals[static_cast<size_t>(i)] =
            norm(triple_product(a, b * lambda, c) - triple_product(a, b, c) * std::conj(lambda));

        auto residual_op = [&](const Element& x) {
            const Element t1 = l_apply(a, b, l_apply(c, d, x));
            const Element t2 = l_apply(c, d, l_apply(a, b, x));
            const Element t3 = l_apply(triple_product(a, b, c), d, x);
            const Element t4 = l_apply(c, triple_product(b, a, d), x);
            return t1 - t2 - t3 + t4;
        };
        axioms[2].residuals[static_cast<size_t>(i)] =
            operator_norm(materialize_complex_operator(f, residual_op));

        if (f.rank() >= 2) {
            const auto pair = sample_orthogonal_minimals(f, 2, Rng::derive(s, 9), tol);
            Rng rng(Rng::derive(s, 10));
            const Complex la(0.2 + rng.uniform(), rng.uniform());
            const Complex mu(rng.uniform(), -0.3 - rng.uniform());
            const Element x = pair[0].element * la;
            const Element y = pair[1].element * mu;
            const double expect = std::max(std::abs(la), std::abs(mu));
            axioms[3].residuals[static_cast<size_t>(i)] = std::max(
                std::abs(norm(x + y) - expect), std::abs(norm(x - y) - expect));
        }
    });

    json rows = json::array();
    Table table{{"axiom", "checks", "max_residual", "mean_residual", "pass"}, {}};
    bool all_pass = true;
    for (const auto& a : axioms) {
        double worst = 0.0, sum = 0.0;
        for (double r : a.residuals) {
            worst = std::max(worst, r);
            sum += r;
        }
        const bool pass = worst <= a.bound;
        all_pass = all_pass && pass;
        json row;
        row["axiom"] = a.name;
        row["checks"] = n;
        row["max_residual"] = worst;
        row["mean_residual"] = n ? sum / static_cast<double>(n) : 0.0;
        row["bound"] = a.bound;
        row["pass"] = pass;
        rows.push_back(row);
        table.rows.push_back({a.name, std::to_string(n), fmt_double(worst),
                              fmt_double(n ? sum / static_cast<double>(n) : 0.0),
                              pass ? "true" : "false"});
    }

    json out;
    out["command"] = "axioms";
    out["config"] = config_json(opts);
    out["config"]["n"] = n;
    out["axioms"] = rows;
    out["pass"] = all_pass;
    emit(out, table, opts.format);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// distance

int run_distance(const CommonOpts& opts, long n, double bound) {
    const Factor f = Factor::parse(opts.factor);
    const Tolerance tol = tol_of(opts);
    std::vector<double> residuals(static_cast<size_t>(n), 0.0);
    parallel_for(n, opts.jobs, [&](long i) {
        const std::uint64_t s = Rng::derive(opts.seed, static_cast<std::uint64_t>(i));
        const Element u = sample_minimal_tripotent(f, s);
        const Element v = sample_minimal_tripotent(f, Rng::derive(s, 1));
        residuals[static_cast<size_t>(i)] = std::abs(minimal_distance(u, v, tol) - norm(u - v));
    });
    double worst = 0.0, sum = 0.0;
    for (double r : residuals) {
        worst = std::max(worst, r);
        sum += r;
    }
    const bool pass = worst <= bound;

    json out;
    out["command"] = "distance";
    out["config"] = config_json(opts);
    out["config"]["n"] = n;
    out["config"]["bound"] = bound;
    out["pairs"] = n;
    out["max_residual"] = worst;
    out["mean_residual"] = n ? sum / static_cast<double>(n) : 0.0;
    out["pass"] = pass;
    Table table{{"factor", "pairs", "max_residual", "mean_residual", "pass"},
                {{opts.factor, std::to_string(n), fmt_double(worst),
                  fmt_double(n ? sum / static_cast<double>(n) : 0.0), pass ? "true" : "false"}}};
    emit(out, table, opts.format);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// classify

int run_classify(const CommonOpts& opts, const std::string& file,
                 const std::string& sample_kind) {
    const Tolerance tol = tol_of(opts);
    const Element x = load_or_sample_element(opts, file, sample_kind, 0);
    const bool trip = is_tripotent(x, tol);

    json out;
    out["command"] = "classify";
    out["config"] = config_json(opts);
    out["element"] = element_json(x);
    out["norm"] = norm(x);
    out["is_tripotent"] = trip;
    out["tripotency_residual"] = norm(triple_product(x, x, x) - x);
    Table table{{"is_tripotent", "label", "rank", "minimal", "complete", "unitary"}, {}};
    if (trip) {
        const TripotentInfo info = classify(x, tol);
        out["label"] = info.label();
        out["minimal"] = info.minimal;
        out["complete"] = info.complete;
        out["unitary"] = info.unitary;
        out["rank"] = info.rank;
        table.rows.push_back({"true", info.label(), std::to_string(info.rank),
                              info.minimal ? "true" : "false", info.complete ? "true" : "false",
                              info.unitary ? "true" : "false"});
    } else {
        out["label"] = "not-a-tripotent";
        table.rows.push_back({"false", "not-a-tripotent", "-", "-", "-", "-"});
    }
    emit(out, table, opts.format);
    return 0;
}

// ---------------------------------------------------------------------------
// frame

int run_frame(const CommonOpts& opts, const std::string& e_file, const std::string& v_file) {
    const Tolerance tol = tol_of(opts);
    const Element e = load_or_sample_element(opts, e_file, "minimal", 0);
    const Element v = load_or_sample_element(opts, v_file, "minimal", 1);
    const FrameDecomposition dec = classify_pair(e, v, tol);

    json coeffs = json::array();
    for (const Complex& c : dec.coefficients) coeffs.push_back({c.real(), c.imag()});
    json frame = json::array();
    for (const auto& t : dec.frame) {
        json fe;
        fe["element"] = element_json(t.element);
        fe["label"] = t.info.label();
        fe["rank"] = t.info.rank;
        frame.push_back(fe);
    }

    json out;
    out["command"] = "frame";
    out["config"] = config_json(opts);
    out["shape"] = frame_shape_name(dec.shape);
    out["coefficients"] = coeffs;
    out["frame"] = frame;
    out["reconstruction_residual"] = norm(dec.reconstruct() - v);
    Table table{{"shape", "coefficients", "reconstruction_residual"},
                {{frame_shape_name(dec.shape), std::to_string(dec.coefficients.size()),
                  fmt_double(norm(dec.reconstruct() - v))}}};
    emit(out, table, opts.format);
    return 0;
}

// ---------------------------------------------------------------------------
// grid

int run_grid(const CommonOpts& opts) {
    const Factor f = Factor::parse(opts.factor);
    const Tolerance tol = tol_of(opts);
    const Grid grid = standard_grid(f, tol);

    json elements = json::array();
    for (size_t k = 0; k < grid.elements.size(); ++k) {
        json ge;
        ge["index"] = {grid.indices[k].first, grid.indices[k].second};
        ge["label"] = grid.elements[k].info.label();
        ge["rank"] = grid.elements[k].info.rank;
        ge["element"] = element_json(grid.elements[k].element);
        elements.push_back(ge);
    }
    json rel = json::array();
    Table table{{"i", "j", "relation"}, {}};
    for (size_t a = 0; a < grid.elements.size(); ++a) {
        json row = json::array();
        for (size_t b = 0; b < grid.elements.size(); ++b) {
            row.push_back(grid.relations[a][b]);
            if (a < b) {
                table.rows.push_back({std::to_string(a), std::to_string(b), grid.relations[a][b]});
            }
        }
        rel.push_back(row);
    }

    json out;
    out["command"] = "grid";
    out["config"] = config_json(opts);
    out["size"] = grid.elements.size();
    out["elements"] = elements;
    out["relations"] = rel;
    emit(out, table, opts.format);
    return 0;
}

// ---------------------------------------------------------------------------
// synth

int run_synth(const CommonOpts& opts, const std::string& oracle_name, double noise,
              int samples) {
    const Factor f = Factor::parse(opts.factor);
    const Tolerance tol = tol_of(opts);
    const SphereOracle oracle =
        make_oracle(oracle_kind_from_name(oracle_name), f, Rng::derive(opts.seed, 0xA), noise, tol);
    const ExtensionResult res = synthesize_extension(oracle, Rng::derive(opts.seed, 0xB), tol);
    const VerificationReport rep =
        verify_extension(res, oracle, samples, Rng::derive(opts.seed, 0xC), tol);

    json out;
    out["command"] = "synth";
    out["config"] = config_json(opts);
    out["oracle"] = oracle.name();
    out["domain"] = oracle.domain().descriptor();
    out["codomain"] = oracle.codomain().descriptor();
    out["branch"] = branch_name(res.branch);
    out["synthesis_max_residual"] = res.max_residual;
    out["verify"] = {{"samples", rep.samples},
                     {"max_residual", rep.max_residual},
                     {"mean_residual", rep.mean_residual},
                     {"isometry_defect", rep.isometry_defect},
                     {"linearity_defect", rep.linearity_defect},
                     {"flagged", rep.flagged}};
    if (oracle.ground_truth()) {
        out["ground_truth_distance"] =
            RealLinearOperator::distance(res.op, *oracle.ground_truth());
        out["ground_truth_branch"] = branch_name(*oracle.ground_truth_branch());
    }
    const bool pass = !rep.flagged;
    out["pass"] = pass;
    Table table{{"oracle", "branch", "max_residual", "flagged"},
                {{oracle.name(), branch_name(res.branch), fmt_double(rep.max_residual),
                  rep.flagged ? "true" : "false"}}};
    emit(out, table, opts.format);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// fuzz

int run_fuzz(const CommonOpts& opts, const std::string& oracle_name, long budget,
             double noise) {
    const Factor f = Factor::parse(opts.factor);
    const Tolerance tol = tol_of(opts);
    const SphereOracle oracle =
        make_oracle(oracle_kind_from_name(oracle_name), f, Rng::derive(opts.seed, 0xA), noise, tol);
    const FuzzReport rep = conformance_fuzz(oracle, Rng::derive(opts.seed, 0xF), budget, tol,
                                            opts.jobs);

    json props = json::array();
    Table table{{"property", "checks", "violations", "worst_residual", "reproducer_seed"}, {}};
    for (const auto& p : rep.properties) {
        json row;
        row["property"] = p.property;
        row["supported"] = p.supported;
        row["checks"] = p.checks;
        row["violations"] = p.violations;
        row["worst_residual"] = p.worst_residual;
        if (p.violations > 0) row["reproducer_seed"] = p.reproducer_seed;
        props.push_back(row);
        table.rows.push_back({p.property, std::to_string(p.checks),
                              std::to_string(p.violations), fmt_double(p.worst_residual),
                              p.violations > 0 ? std::to_string(p.reproducer_seed) : "-"});
    }

    json out;
    out["command"] = "fuzz";
    out["config"] = config_json(opts);
    out["config"]["budget"] = budget;
    out["oracle"] = oracle.name();
    out["properties"] = props;
    out["total_checks"] = rep.total_checks;
    out["total_violations"] = rep.total_violations;
    out["pass"] = rep.total_violations == 0;
    emit(out, table, opts.format);
    return rep.total_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jbtlab: a numerical laboratory for finite-dimensional JB*-triples"};
    app.require_subcommand(1);

    CommonOpts opts;
    try {
        opts.seed = default_seed();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    long n = 1000;
    long budget = 1000;
    double bound = 1e-6;
    double noise = 1e-3;
    int samples = 200;
    std::string oracle_name = "identity";
    std::string in_file, e_file, v_file;
    std::string sample_kind = "minimal";

    CLI::App* axioms = app.add_subcommand("axioms", "check the JB*-triple axioms on random samples");
    add_common(axioms, opts);
    axioms->add_option("--n", n, "number of random samples");

    CLI::App* distance = app.add_subcommand("distance", "distance formula vs direct spectral norm");
    add_common(distance, opts);
    distance->add_option("--n", n, "number of random minimal pairs");
    distance->add_option("--bound", bound, "pass bound on |formula - norm|");

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify a tripotent");
    add_common(classify_cmd, opts);
    classify_cmd->add_option("--in", in_file, "element JSON file");
    classify_cmd->add_option("--sample", sample_kind, "minimal | sphere | element")
        ->check(CLI::IsMember({"minimal", "sphere", "element"}));

    CLI::App* frame = app.add_subcommand("frame", "decompose a minimal pair over a frame");
    add_common(frame, opts);
    frame->add_option("--e", e_file, "first element JSON file (defaults to a sampled minimal)");
    frame->add_option("--v", v_file, "second element JSON file (defaults to a sampled minimal)");

    CLI::App* grid = app.add_subcommand("grid", "dump the standard grid with its relation table");
    add_common(grid, opts);

    CLI::App* synth = app.add_subcommand("synth", "synthesize the real-linear extension of an oracle");
    add_common(synth, opts);
    synth->add_option("--oracle", oracle_name,
                      "identity | unitary_pair | transpose | entrywise_conjugation | "
                      "spin_orthogonal_phase | noisy | phase_warp");
    synth->add_option("--noise", noise, "noise amplitude for the noisy oracle");
    synth->add_option("--samples", samples, "verification sample count");

    CLI::App* fuzz = app.add_subcommand("fuzz", "behavioral conformance fuzzing of a sphere oracle");
    add_common(fuzz, opts);
    fuzz->add_option("--oracle", oracle_name, "oracle kind (see synth)");
    fuzz->add_option("--budget", budget, "total number of checks");
    fuzz->add_option("--noise", noise, "noise amplitude for the noisy oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    // Input validation phase: descriptor and tolerance errors are usage errors.
    try {
        if (!opts.factor.empty()) Factor::parse(opts.factor);
        tol_of(opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (axioms->parsed()) return run_axioms(opts, n);
        if (distance->parsed()) return run_distance(opts, n, bound);
        if (classify_cmd->parsed()) return run_classify(opts, in_file, sample_kind);
        if (frame->parsed()) return run_frame(opts, e_file, v_file);
        if (grid->parsed()) return run_grid(opts);
        if (synth->parsed()) return run_synth(opts, oracle_name, noise, samples);
        if (fuzz->parsed()) return run_fuzz(opts, oracle_name, budget, noise);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
    return 2;
}
