// Command-line front end: classify maps, decompose extremal face maps,
// run spectrum and functional entanglement tests, and inspect Choi matrices.
//
// Exit codes: 0 success / negative result not found; 1 input error;
// 2 domain verdict (not positive, entangled, constraint violated, ...);
// 3 internal error.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posmap/posmap.hpp"

namespace {

using namespace posmap;

std::uint64_t default_seed() {
    const char* env = std::getenv("POSMAP_SEED");
    if (!env || !*env)
        return 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        throw ParseError(std::string("POSMAP_SEED is not an integer: ") + env);
    return static_cast<std::uint64_t>(v);
}

struct CommonOpts {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t starts = 64;
    bool json = false;

    SeesawConfig seesaw() const {
        SeesawConfig cfg;
        cfg.starts = starts;
        cfg.seed = seed;
        cfg.tol = tol;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol", o.tol, "numerical tolerance")->capture_default_str();
    cmd->add_option("--seed", o.seed, "seed for randomized searches (default: POSMAP_SEED)");
    cmd->add_option("--starts", o.starts, "random see-saw starts")->capture_default_str();
    cmd->add_flag("--json", o.json, "emit a JSON report instead of text");
}

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(what + ": expected a number, got \"" + s + "\"");
    }
}

// "re" or "re,im"
Complex parse_complex(const std::string& s, const std::string& what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        return Complex{parse_real(s, what), 0.0};
    return Complex{parse_real(s.substr(0, comma), what),
                   parse_real(s.substr(comma + 1), what)};
}

// "e1", "e2", ... or entries joined by ';', each "re" or "re,im".
// The result is normalized.
Vector parse_vector(const std::string& s, std::size_t dim, const std::string& what) {
    if (s.size() >= 2 && s[0] == 'e' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
        const std::size_t k = std::stoul(s.substr(1));
        if (k < 1 || k > dim)
            throw ParseError(what + ": basis index out of range for dimension " +
                             std::to_string(dim));
        return basis_vector(dim, k - 1);
    }
    Vector v;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto semi = s.find(';', pos);
        const std::string entry =
            semi == std::string::npos ? s.substr(pos) : s.substr(pos, semi - pos);
        v.push_back(parse_complex(entry, what));
        if (semi == std::string::npos)
            break;
        pos = semi + 1;
    }
    if (v.size() != dim)
        throw ParseError(what + ": expected " + std::to_string(dim) + " entries, got " +
                         std::to_string(v.size()));
    const double n = vnorm(v);
    if (n < 1e-14)
        throw ParseError(what + ": zero vector");
    for (Complex& c : v)
        c /= n;
    return v;
}

MapRep named_map(const std::string& name, std::size_t dim) {
    if (name == "identity")
        return identity_map(dim);
    if (name == "transpose")
        return transpose_map(dim);
    if (name == "depolarizing")
        return depolarizing_map(dim);
    if (name == "choi3")
        return choi_map_3();
    throw ParseError("unknown map name \"" + name +
                     "\" (expected identity|transpose|depolarizing|choi3)");
}

struct MapInput {
    std::string file;
    std::string name;
    std::size_t dim = 2;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--file", file, "map file (JSON; \"-\" reads stdin)");
        cmd->add_option("--map", name, "built-in map: identity|transpose|depolarizing|choi3");
        cmd->add_option("--dim", dim, "dimension for built-in maps (ignored by choi3)")
            ->capture_default_str();
    }

    MapRep load() const {
        if (!file.empty() && !name.empty())
            throw ParseError("give either --file or --map, not both");
        if (!file.empty())
            return map_from_json(parse_json_text(slurp(file), file), file);
        if (!name.empty())
            return named_map(name, dim);
        throw ParseError("a map is required: use --file or --map");
    }
};

DensityMatrix load_state(const std::string& file) {
    if (file.empty())
        throw ParseError("a state is required: use --state");
    return state_from_json(parse_json_text(slurp(file), file), file);
}

Basis2 basis_from_file(const std::string& file) {
    const Matrix m = matrix_from_json(parse_json_text(slurp(file), file), file);
    if (m.rows() != 2 || m.cols() != 2)
        throw ParseError(file + ": expected a 2x2 matrix whose columns are the basis");
    Basis2 b;
    for (std::size_t k = 0; k < 2; ++k)
        b[k] = Vector{m(0, k), m(1, k)};
    return b;
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

std::string fmt(Complex c) {
    std::ostringstream ss;
    ss << std::setprecision(12) << "(" << c.real() << ", " << c.imag() << ")";
    return ss.str();
}

void print_matrix(const std::string& label, const Matrix& m) {
    std::cout << label << ":\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::cout << " ";
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::cout << " " << fmt(m(i, j));
        std::cout << "\n";
    }
}

ordered_json vector_to_json(const Vector& v) {
    ordered_json arr = ordered_json::array();
    for (const Complex& c : v)
        arr.push_back({c.real(), c.imag()});
    return arr;
}

void emit(const CommonOpts& o, const ordered_json& report) {
    if (o.json)
        std::cout << report.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_classify(const MapInput& in, const CommonOpts& o) {
    const MapRep t = in.load();
    const Classification c = classify(t, o.seesaw());

    ordered_json r;
    r["command"] = "classify";
    r["dim_in"] = t.dim_in;
    r["dim_out"] = t.dim_out;
    r["verdict"] = to_string(c.verdict);
    r["cp_min_eig"] = c.cp_min_eig;
    r["cocp_min_eig"] = c.cocp_min_eig;
    r["block_min"] = c.block_min;
    r["decomposable_regime"] = c.decomposable;
    if (c.witness) {
        r["witness"]["x"] = vector_to_json(c.witness->first);
        r["witness"]["y"] = vector_to_json(c.witness->second);
    } else {
        r["witness"] = nullptr;
    }
    if (!o.json) {
        std::cout << "verdict: " << to_string(c.verdict) << "\n";
        std::cout << "cp_min_eig: " << fmt(c.cp_min_eig) << "\n";
        std::cout << "cocp_min_eig: " << fmt(c.cocp_min_eig) << "\n";
        std::cout << "block_min: " << fmt(c.block_min) << "\n";
        std::cout << "decomposable_regime: " << (c.decomposable ? "yes" : "no") << "\n";
        if (c.witness) {
            std::cout << "witness_x:";
            for (const Complex& v : c.witness->first)
                std::cout << " " << fmt(v);
            std::cout << "\nwitness_y:";
            for (const Complex& v : c.witness->second)
                std::cout << " " << fmt(v);
            std::cout << "\n";
        }
    }
    emit(o, r);
    return c.verdict == Verdict::NotPositive ? 2 : 0;
}

int cmd_decompose2(double lambda, const std::string& ys, const std::string& zs,
                   const std::string& ts, const std::string& xi_file,
                   const std::string& eta_file, const CommonOpts& o) {
    FaceMapParams p;
    p.lambda = lambda;
    p.y = parse_complex(ys, "--y");
    p.z = parse_complex(zs, "--z");
    p.t = parse_complex(ts, "--t");
    if (!xi_file.empty())
        p.xi_basis = basis_from_file(xi_file);
    if (!eta_file.empty())
        p.eta_basis = basis_from_file(eta_file);

    const ExtremalDecomposition d = decompose_extremal(p);
    const MapRep whole = face_map_choi(p);
    const bool ok = d.valid(o.tol);

    ordered_json r;
    r["command"] = "decompose2";
    r["lambda"] = p.lambda;
    r["y"] = {p.y.real(), p.y.imag()};
    r["z"] = {p.z.real(), p.z.imag()};
    r["t"] = {p.t.real(), p.t.imag()};
    r["c"] = {d.c.real(), d.c.imag()};
    const auto part_json = [](const ExtremalDecomposition::Part& q) {
        ordered_json pj;
        pj["lambda"] = q.lambda;
        pj["a"] = q.a;
        pj["t"] = {q.t.real(), q.t.imag()};
        pj["b"] = q.b;
        return pj;
    };
    r["part1"] = part_json(d.part1);
    r["part2"] = part_json(d.part2);
    r["H_T"] = matrix_to_json(whole.choi);
    r["H_T1"] = matrix_to_json(d.t1.choi);
    r["H_T2"] = matrix_to_json(d.t2.choi);
    r["sum_residual"] = d.sum_residual;
    r["t2_min_eig"] = d.t2_min_eig;
    r["pt1_min_eig"] = d.pt1_min_eig;
    r["param_residual"] = d.param_residual;
    r["valid"] = ok;

    if (!o.json) {
        std::cout << "part1: lambda=" << fmt(d.part1.lambda) << " a=" << fmt(d.part1.a)
                  << " t=" << fmt(d.part1.t) << " b=" << fmt(d.part1.b) << "\n";
        std::cout << "part2: lambda=" << fmt(d.part2.lambda) << " a=" << fmt(d.part2.a)
                  << " t=" << fmt(d.part2.t) << " b=" << fmt(d.part2.b) << "\n";
        std::cout << "c: " << fmt(d.c) << "\n";
        print_matrix("H_T", whole.choi);
        print_matrix("H_T1 (completely copositive part)", d.t1.choi);
        print_matrix("H_T2 (completely positive part)", d.t2.choi);
        std::cout << "sum_residual: " << fmt(d.sum_residual) << "\n";
        std::cout << "t2_min_eig: " << fmt(d.t2_min_eig) << "\n";
        std::cout << "pt1_min_eig: " << fmt(d.pt1_min_eig) << "\n";
        std::cout << "param_residual: " << fmt(d.param_residual) << "\n";
        std::cout << "checks: " << (ok ? "all passed" : "FAILED") << "\n";
    }
    emit(o, r);
    return ok ? 0 : 2;
}

int cmd_ppt(const std::string& state_file, const CommonOpts& o) {
    const DensityMatrix s = load_state(state_file);
    const PptReport rep = ppt_test(s, o.tol);

    ordered_json r;
    r["command"] = "ppt";
    r["dims"] = {s.d1, s.d2};
    r["ppt"] = rep.ppt;
    r["min_eig"] = rep.min_eig;
    r["verdict"] = to_string(rep.verdict);
    r["eigvec"] = vector_to_json(rep.eigvec);
    if (!o.json) {
        std::cout << "partial transpose: " << (rep.ppt ? "PPT" : "NPT") << "\n";
        std::cout << "min_eig: " << fmt(rep.min_eig) << "\n";
        std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    }
    emit(o, r);
    return rep.verdict == SepVerdict::Entangled ? 2 : 0;
}

int cmd_witness(const MapInput& in, const std::string& state_file, const std::string& side,
                const CommonOpts& o) {
    const MapRep t = in.load();
    const DensityMatrix s = load_state(state_file);
    Factor f;
    if (side == "first")
        f = Factor::First;
    else if (side == "second")
        f = Factor::Second;
    else
        throw ParseError("--side must be first or second");
    const WitnessReport rep = witness_apply(t, s, f, o.tol, nullptr, o.seesaw());

    ordered_json r;
    r["command"] = "witness";
    r["side"] = side;
    r["map_verdict"] = to_string(rep.map_verdict);
    r["min_eig"] = rep.min_eig;
    r["entangled"] = rep.entangled;
    r["eigvec"] = vector_to_json(rep.eigvec);
    if (!o.json) {
        std::cout << "map_verdict: " << to_string(rep.map_verdict) << "\n";
        std::cout << "min_eig: " << fmt(rep.min_eig) << "\n";
        std::cout << "entangled: " << (rep.entangled ? "yes" : "no") << "\n";
    }
    emit(o, r);
    return rep.entangled ? 2 : 0;
}

int cmd_screen(const std::vector<std::string>& names, const std::vector<std::string>& files,
               std::size_t dim, const std::string& state_file, const CommonOpts& o) {
    std::vector<MapRep> battery;
    for (const std::string& n : names)
        battery.push_back(named_map(n, dim));
    for (const std::string& f : files)
        battery.push_back(map_from_json(parse_json_text(slurp(f), f), f));
    if (battery.empty())
        throw ParseError("the screen needs at least one --map or --file");
    const DensityMatrix s = load_state(state_file);
    const ScreenReport rep = separability_screen(s, battery, o.tol, o.seesaw());

    ordered_json r;
    r["command"] = "screen";
    r["verdict"] = to_string(rep.verdict);
    r["entries"] = ordered_json::array();
    for (const ScreenEntry& e : rep.entries) {
        ordered_json ej;
        ej["map_index"] = e.map_index;
        ej["side"] = e.side == Factor::First ? "first" : "second";
        ej["min_eig"] = e.min_eig;
        ej["negative"] = e.negative;
        r["entries"].push_back(ej);
    }
    if (!o.json) {
        for (const ScreenEntry& e : rep.entries)
            std::cout << "map " << e.map_index << " side "
                      << (e.side == Factor::First ? "first" : "second")
                      << " min_eig " << fmt(e.min_eig) << (e.negative ? " NEGATIVE" : "")
                      << "\n";
        std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    }
    emit(o, r);
    return rep.verdict == ScreenVerdict::Entangled ? 2 : 0;
}

int cmd_face(const MapInput& in, const std::string& xi_s, const std::string& eta_s,
             const CommonOpts& o) {
    const MapRep t = in.load();
    const Vector xi = parse_vector(xi_s, t.dim_in, "--xi");
    const Vector eta = parse_vector(eta_s, t.dim_out, "--eta");
    const double residual = vnorm(matvec(apply_map(t, projector(xi)), eta));
    const bool member = in_maximal_face_P(t, FaceSpecP{xi, eta}, o.tol);

    ordered_json r;
    r["command"] = "face";
    r["xi"] = vector_to_json(xi);
    r["eta"] = vector_to_json(eta);
    r["residual"] = residual;
    r["member"] = member;
    if (!o.json) {
        std::cout << "residual: " << fmt(residual) << "\n";
        std::cout << (member ? "member of F_max" : "not a member of F_max") << "\n";
    }
    emit(o, r);
    return member ? 0 : 2;
}

int cmd_choi(const MapInput& in, const CommonOpts& o) {
    const MapRep t = in.load();
    const EigResult e = eig_hermitian(t.choi);

    ordered_json r;
    r["command"] = "choi";
    r["dim_in"] = t.dim_in;
    r["dim_out"] = t.dim_out;
    r["choi"] = matrix_to_json(t.choi);
    r["eigenvalues"] = e.values;
    if (!o.json) {
        print_matrix("choi", t.choi);
        std::cout << "eigenvalues:";
        for (double v : e.values)
            std::cout << " " << fmt(v);
        std::cout << "\n";
    }
    emit(o, r);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"positive linear maps between matrix algebras: classification, extremal "
                 "decomposition, and entanglement detection"};
    app.require_subcommand(1);
    int rc = 0;

    CommonOpts oc;
    MapInput mc;
    auto* classify_cmd = app.add_subcommand("classify", "classify a map as CP / co-CP / "
                                                        "positive / not positive");
    add_common(classify_cmd, oc);
    mc.add_to(classify_cmd);
    classify_cmd->callback([&] { rc = cmd_classify(mc, oc); });

    CommonOpts od;
    double lambda = 0.0;
    std::string ys = "0", zs = "0", ts = "0", xi_file, eta_file;
    auto* dec = app.add_subcommand("decompose2", "split an extremal-slice face map into "
                                                 "completely copositive and completely positive parts");
    add_common(dec, od);
    dec->add_option("--lambda", lambda, "diagonal parameter in (0, 1]")->required();
    dec->add_option("--y", ys, "outer corner (\"re\" or \"re,im\")")->capture_default_str();
    dec->add_option("--z", zs, "inner corner")->capture_default_str();
    dec->add_option("--t", ts, "coupling entry")->capture_default_str();
    dec->add_option("--xi-basis", xi_file, "2x2 matrix file; columns replace the input basis");
    dec->add_option("--eta-basis", eta_file, "2x2 matrix file; columns replace the output basis");
    dec->callback([&] { rc = cmd_decompose2(lambda, ys, zs, ts, xi_file, eta_file, od); });

    CommonOpts op;
    std::string ppt_state;
    auto* ppt = app.add_subcommand("ppt", "partial-transpose spectrum test for a bipartite state");
    add_common(ppt, op);
    ppt->add_option("--state", ppt_state, "state file (JSON with \"dims\")")->required();
    ppt->callback([&] { rc = cmd_ppt(ppt_state, op); });

    CommonOpts ow;
    MapInput mw;
    std::string wit_state, side = "first";
    auto* wit = app.add_subcommand("witness", "apply a positive map's functional to one factor");
    add_common(wit, ow);
    mw.add_to(wit);
    wit->add_option("--state", wit_state, "state file")->required();
    wit->add_option("--side", side, "first|second")->capture_default_str();
    wit->callback([&] { rc = cmd_witness(mw, wit_state, side, ow); });

    CommonOpts os;
    std::vector<std::string> screen_names, screen_files;
    std::size_t screen_dim = 2;
    std::string screen_state;
    auto* scr = app.add_subcommand("screen", "run a battery of maps against a state");
    add_common(scr, os);
    scr->add_option("--map", screen_names, "built-in maps (repeatable)");
    scr->add_option("--file", screen_files, "map files (repeatable)");
    scr->add_option("--dim", screen_dim, "dimension for built-in maps")->capture_default_str();
    scr->add_option("--state", screen_state, "state file")->required();
    scr->callback([&] { rc = cmd_screen(screen_names, screen_files, screen_dim, screen_state, os); });

    CommonOpts of;
    MapInput mf;
    std::string xi_s, eta_s;
    auto* face = app.add_subcommand("face", "maximal-face membership test");
    add_common(face, of);
    mf.add_to(face);
    face->add_option("--xi", xi_s, "input vector: e<k> or entries \"re,im\" joined by ';'")
        ->required();
    face->add_option("--eta", eta_s, "output vector, same syntax")->required();
    face->callback([&] { rc = cmd_face(mf, xi_s, eta_s, of); });

    CommonOpts oh;
    MapInput mh;
    auto* choi = app.add_subcommand("choi", "print a map's Choi matrix and spectrum");
    add_common(choi, oh);
    mh.add_to(choi);
    choi->callback([&] { rc = cmd_choi(mh, oh); });

    try {
        for (CommonOpts* o : {&oc, &od, &op, &ow, &os, &of, &oh})
            o->seed = default_seed();
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ShapeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const MalformedSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotHermitian& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidState& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        // remaining library errors are domain verdicts (constraint violations,
        // degeneracies, gating failures)
        std::cerr << "verdict: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
