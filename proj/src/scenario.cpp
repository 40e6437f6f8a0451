#include "esbgk/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "esbgk/gaussians.hpp"
#include "esbgk/moments.hpp"
#include "esbgk/sampling.hpp"

namespace esbgk {

using nlohmann::json;

const char* to_string(InitialFamily family) {
    switch (family) {
        case InitialFamily::maxwellian01: return "maxwellian01";
        case InitialFamily::maxwellian00: return "maxwellian00";
        case InitialFamily::gaussian_theta: return "gaussian_theta";
        case InitialFamily::bimodal: return "bimodal";
        case InitialFamily::random_mixture: return "random_mixture";
    }
    return "?";
}

namespace {

/// JSON object accessor that reports failures by path.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return j_; }

    std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& what) const { throw ValidationError(path_.empty() ? "<root>" : path_, what); }

    void require_object() const {
        if (!j_.is_object()) fail("expected an object");
    }

    void allow_only(std::initializer_list<const char*> keys) const {
        require_object();
        for (const auto& [k, v] : j_.items()) {
            bool known = false;
            for (const char* a : keys) known = known || k == a;
            if (!known) throw ValidationError(child_path(k), "unknown key");
        }
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    Node at(const char* key) const {
        if (!has(key)) throw ValidationError(child_path(key), "required key missing");
        return Node(j_.at(key), child_path(key));
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        const double v = j_.get<double>();
        if (!std::isfinite(v)) fail("must be finite");
        return v;
    }

    long long integer() const {
        if (j_.is_number_integer()) return j_.get<long long>();
        if (j_.is_number_float()) {
            const double v = j_.get<double>();
            if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long long>(v);
        }
        fail("expected an integer");
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    double number_or(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }

    /// Length-d vector; a scalar is broadcast.
    Vec vector(int d) const {
        if (j_.is_number()) return Vec::Constant(d, number());
        if (!j_.is_array() || static_cast<int>(j_.size()) != d)
            fail("expected a number or an array of " + std::to_string(d) + " numbers");
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = Node(j_[i], path_ + "[" + std::to_string(i) + "]").number();
        return v;
    }

    /// Symmetric positive definite d x d matrix: a scalar (multiple of the
    /// identity), a length-d diagonal, or a full nested array.
    Mat spd(int d) const {
        Mat m(d, d);
        if (j_.is_number()) {
            m = number() * Mat::Identity(d, d);
        } else if (j_.is_array() && static_cast<int>(j_.size()) == d && !j_.empty() && j_[0].is_number()) {
            m = vector(d).asDiagonal();
        } else if (j_.is_array() && static_cast<int>(j_.size()) == d) {
            for (int r = 0; r < d; ++r) {
                const Node row(j_[r], path_ + "[" + std::to_string(r) + "]");
                const Vec rv = row.vector(d);
                if (!row.raw().is_array()) row.fail("expected an array of " + std::to_string(d) + " numbers");
                m.row(r) = rv.transpose();
            }
        } else {
            fail("expected a number, a diagonal of " + std::to_string(d) + " numbers or a " + std::to_string(d) +
                 "x" + std::to_string(d) + " matrix");
        }
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * m.cwiseAbs().maxCoeff())
            fail("matrix must be symmetric");
        const auto eig = jacobi_eigen(m);
        if (!(eig.values[0] > 0.0)) fail("matrix must be positive definite");
        return m;
    }

private:
    const json& j_;
    std::string path_;
};

double positive(const Node& n) {
    const double v = n.number();
    if (!(v > 0.0)) n.fail("must be > 0");
    return v;
}

ModelParams parse_params(const Node& n) {
    n.allow_only({"d", "delta", "nu", "theta", "mu"});
    ModelParams p;
    if (n.has("d")) p.d = static_cast<int>(n.at("d").integer());
    p.delta = n.number_or("delta", p.delta);
    p.nu = n.number_or("nu", p.nu);
    p.theta = n.number_or("theta", p.theta);
    p.mu = n.number_or("mu", p.mu);
    try {
        validate(p);
    } catch (const ValidationError& e) {
        const std::string prefix = e.field() + ": ";
        std::string what = e.what();
        if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
        throw ValidationError(n.child_path(e.field()), what);
    }
    return p;
}

int node_count(const Node& n) {
    const long long v = n.integer();
    if (v < kMinNodes || v > (1 << 20)) n.fail("node count must be in [" + std::to_string(kMinNodes) + ", 1048576]");
    return static_cast<int>(v);
}

void parse_grid(const Node& n, Scenario& s) {
    const int d = s.params.d;
    if (n.raw().is_string()) {
        if (n.string() != "auto") n.fail("expected \"auto\" or an object");
        return;
    }
    n.require_object();
    if (n.has("auto")) {
        n.allow_only({"auto"});
        const Node a = n.at("auto");
        a.allow_only({"safety", "n_v", "n_I"});
        s.auto_safety = a.number_or("safety", s.auto_safety);
        if (!(s.auto_safety >= 4.0)) a.at("safety").fail("must be >= 4");
        NodeProfile prof = default_profile(d);
        if (a.has("n_v")) prof.n_v = node_count(a.at("n_v"));
        if (a.has("n_I")) prof.n_I = node_count(a.at("n_I"));
        s.auto_profile = prof;
        return;
    }
    n.allow_only({"n_v", "half_width", "center", "n_I", "I_max"});
    GridSpec g;
    const Node nv = n.at("n_v");
    if (nv.raw().is_array()) {
        if (static_cast<int>(nv.raw().size()) != d) nv.fail("expected " + std::to_string(d) + " node counts");
        for (int a = 0; a < d; ++a) g.n_v[a] = node_count(Node(nv.raw()[a], nv.path() + "[" + std::to_string(a) + "]"));
    } else {
        const int c = node_count(nv);
        for (int a = 0; a < d; ++a) g.n_v[a] = c;
    }
    const Vec L = n.at("half_width").vector(d);
    const Vec c = n.has("center") ? n.at("center").vector(d) : Vec::Zero(d);
    for (int a = 0; a < d; ++a) {
        if (!(L[a] > 0.0)) n.at("half_width").fail("must be > 0");
        g.half_width[a] = L[a];
        g.center[a] = c[a];
    }
    g.n_I = node_count(n.at("n_I"));
    g.I_max = positive(n.at("I_max"));
    s.grid = g;
}

MixtureComponent maxwellian_component(double rho, const Vec& U, double T_tr, double T_int) {
    const int d = static_cast<int>(U.size());
    return {rho, U, T_tr * Mat::Identity(d, d), T_int};
}

void parse_initial(const Node& n, Scenario& s) {
    const int d = s.params.d;
    n.require_object();
    const std::string family = n.at("family").string();
    auto U_of = [&](const Node& m) { return m.has("U") ? m.at("U").vector(d) : Vec(Vec::Zero(d)); };
    auto rho_of = [&](const Node& m) { return m.has("rho") ? positive(m.at("rho")) : 1.0; };
    auto& comps = s.initial.components;
    comps.clear();

    if (family == "maxwellian01") {
        n.allow_only({"family", "rho", "U", "T"});
        s.initial.family = InitialFamily::maxwellian01;
        const double T = n.has("T") ? positive(n.at("T")) : 1.0;
        comps.push_back(maxwellian_component(rho_of(n), U_of(n), T, T));
    } else if (family == "maxwellian00") {
        n.allow_only({"family", "rho", "U", "T_tr", "T_int"});
        s.initial.family = InitialFamily::maxwellian00;
        comps.push_back(maxwellian_component(rho_of(n), U_of(n), positive(n.at("T_tr")), positive(n.at("T_int"))));
    } else if (family == "gaussian_theta") {
        n.allow_only({"family", "rho", "U", "Theta", "T_int"});
        s.initial.family = InitialFamily::gaussian_theta;
        comps.push_back({rho_of(n), U_of(n), n.at("Theta").spd(d), positive(n.at("T_int"))});
    } else if (family == "bimodal") {
        n.allow_only({"family", "rho", "components"});
        s.initial.family = InitialFamily::bimodal;
        const Node list = n.at("components");
        if (!list.raw().is_array() || list.raw().size() != 2) list.fail("bimodal needs exactly 2 components");
        const double rho = rho_of(n);
        double wsum = 0.0;
        for (int i = 0; i < 2; ++i) {
            const Node c(list.raw()[i], list.path() + "[" + std::to_string(i) + "]");
            c.allow_only({"weight", "U", "Theta", "T_int"});
            const double w = c.has("weight") ? positive(c.at("weight")) : 1.0;
            wsum += w;
            comps.push_back({w, U_of(c), c.at("Theta").spd(d), positive(c.at("T_int"))});
        }
        for (auto& c : comps) c.rho = rho * c.rho / wsum;
    } else if (family == "random_mixture") {
        n.allow_only({"family", "rho", "k", "U_spread", "T_scale"});
        s.initial.family = InitialFamily::random_mixture;
        const long long k = n.at("k").integer();
        if (k < 1 || k > 64) n.at("k").fail("must be in [1, 64]");
        const double rho = rho_of(n);
        const double spread = n.number_or("U_spread", 1.0);
        if (!(spread >= 0.0)) n.at("U_spread").fail("must be >= 0");
        const double T_scale = n.has("T_scale") ? positive(n.at("T_scale")) : 1.0;
        StateSampler sampler(derive_seed(s.seed, 0x6d69787475726531ull));
        double wsum = 0.0;
        for (long long i = 0; i < k; ++i) {
            MixtureComponent c;
            c.rho = sampler.uniform(0.2, 1.0);
            c.U = Vec(d);
            for (int a = 0; a < d; ++a) c.U[a] = spread * sampler.normal();
            c.Theta = sampler.random_spd(d, T_scale);
            c.T_int = T_scale * sampler.log_uniform(0.2, 5.0);
            wsum += c.rho;
            comps.push_back(c);
        }
        for (auto& c : comps) c.rho = rho * c.rho / wsum;
    } else {
        n.at("family").fail("unknown family '" + family +
                            "' (expected maxwellian01, maxwellian00, gaussian_theta, bimodal or random_mixture)");
    }
}

void parse_solver(const Node& n, Scenario& s) {
    n.allow_only({"scheme", "dt", "steps", "t_end", "A_t_end", "report_every", "matched_closures", "track_entropy",
                  "transport"});
    SolverConfig& c = s.solver;
    if (n.has("scheme")) {
        const std::string sch = n.at("scheme").string();
        if (sch == "exponential") c.scheme = Scheme::exponential;
        else if (sch == "rk4") c.scheme = Scheme::rk4;
        else n.at("scheme").fail("expected \"exponential\" or \"rk4\"");
    }
    if (n.has("dt") == n.has("steps")) n.fail("exactly one of dt and steps is required");
    if (n.has("t_end") == n.has("A_t_end")) n.fail("exactly one of t_end and A_t_end is required");
    if (n.has("dt")) s.time.dt = positive(n.at("dt"));
    if (n.has("steps")) {
        const long long k = n.at("steps").integer();
        if (k < 1 || k > 100000000) n.at("steps").fail("must be in [1, 1e8]");
        s.time.steps = static_cast<int>(k);
    }
    if (n.has("t_end")) s.time.t_end = positive(n.at("t_end"));
    if (n.has("A_t_end")) s.time.A_t_end = positive(n.at("A_t_end"));
    if (n.has("report_every")) {
        const long long r = n.at("report_every").integer();
        if (r < 1 || r > 100000000) n.at("report_every").fail("must be >= 1");
        c.report_every = static_cast<int>(r);
    }
    if (n.has("matched_closures")) c.matched_closures = n.at("matched_closures").boolean();
    if (n.has("track_entropy")) c.track_entropy = n.at("track_entropy").boolean();
    c.entropy.matched_closures = c.matched_closures;
    if (n.has("transport")) {
        const Node t = n.at("transport");
        t.allow_only({"n_x", "dx", "periodic", "rho_amplitude", "T_amplitude"});
        TransportConfig tc;
        const long long nx = t.at("n_x").integer();
        if (nx < 2 || nx > 100000) t.at("n_x").fail("must be in [2, 100000]");
        tc.n_x = static_cast<std::size_t>(nx);
        tc.dx = positive(t.at("dx"));
        if (t.has("periodic") && !t.at("periodic").boolean()) t.at("periodic").fail("only periodic boundaries are supported");
        s.modulation.rho_amplitude = t.number_or("rho_amplitude", 0.0);
        s.modulation.T_amplitude = t.number_or("T_amplitude", 0.0);
        if (!(std::abs(s.modulation.rho_amplitude) < 1.0)) t.at("rho_amplitude").fail("must satisfy |a| < 1");
        if (!(std::abs(s.modulation.T_amplitude) < 1.0)) t.at("T_amplitude").fail("must satisfy |a| < 1");
        c.transport = tc;
    }
}

void parse_outputs(const Node& n, Scenario& s) {
    n.allow_only({"dir", "prefix", "snapshots"});
    if (n.has("dir")) s.outputs.dir = n.at("dir").string();
    if (n.has("prefix")) {
        s.outputs.prefix = n.at("prefix").string();
        if (s.outputs.prefix.empty() || s.outputs.prefix.find('/') != std::string::npos)
            n.at("prefix").fail("must be a non-empty file name stem");
    }
    if (n.has("snapshots")) {
        const std::string p = n.at("snapshots").string();
        if (p == "none") s.outputs.snapshots = SnapshotPolicy::none;
        else if (p == "final") s.outputs.snapshots = SnapshotPolicy::final_only;
        else if (p == "initial_and_final") s.outputs.snapshots = SnapshotPolicy::initial_and_final;
        else n.at("snapshots").fail("expected \"none\", \"final\" or \"initial_and_final\"");
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::string msg = e.what();
        if (const auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(line, col, msg);
    }
    const Node root(doc, "");
    root.allow_only({"params", "grid", "initial", "solver", "outputs", "seed"});

    Scenario s;
    if (root.has("seed")) {
        const long long seed = root.at("seed").integer();
        if (seed < 0) root.at("seed").fail("must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    s.params = parse_params(root.at("params"));
    s.solver.params = s.params;
    if (root.has("grid")) parse_grid(root.at("grid"), s);
    parse_initial(root.at("initial"), s);
    parse_solver(root.at("solver"), s);
    if (root.has("outputs")) parse_outputs(root.at("outputs"), s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("scenario", "cannot open file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str());
}

MacroState mixture_moments(const std::vector<MixtureComponent>& comps, double delta) {
    if (comps.empty()) throw ValidationError("initial", "mixture has no components");
    const int d = static_cast<int>(comps.front().U.size());
    double rho = 0.0, int_energy = 0.0;
    Vec mom = Vec::Zero(d);
    for (const auto& c : comps) {
        rho += c.rho;
        mom += c.rho * c.U;
        int_energy += c.rho * c.T_int;
    }
    const Vec U = mom / rho;
    Mat Theta = Mat::Zero(d, d);
    for (const auto& c : comps) {
        const Vec du = c.U - U;
        Theta += c.rho * (c.Theta + du * du.transpose());
    }
    Theta /= rho;
    return MacroState::from_primitive(rho, U, Theta, int_energy / rho, delta);
}

GridFunction sample_mixture(const std::vector<MixtureComponent>& comps, const ModelParams& params,
                            const PhaseGrid& grid) {
    GridFunction f = GridFunction::Zero(static_cast<Eigen::Index>(grid.size()));
    const double lambda = lambda_delta(params.delta);
    for (const auto& c : comps) {
        GaussianSpec g;
        g.rho = c.rho;
        g.U = c.U;
        g.covariance = c.Theta;
        g.T_I = c.T_int;
        g.delta = params.delta;
        g.lambda = lambda;
        f += Gaussian(g).sample(grid);
    }
    return f;
}

namespace {

std::vector<MixtureComponent> modulated(const std::vector<MixtureComponent>& comps, const Modulation& m, double phase) {
    const double rf = 1.0 + m.rho_amplitude * std::sin(phase);
    const double tf = 1.0 + m.T_amplitude * std::cos(phase);
    auto out = comps;
    for (auto& c : out) {
        c.rho *= rf;
        c.Theta *= tf;
        c.T_int *= tf;
    }
    return out;
}

}  // namespace

GridSpec scenario_grid(const Scenario& s) {
    if (s.grid) return *s.grid;
    MacroState st = mixture_moments(s.initial.components, s.params.delta);
    if (s.solver.transport && s.modulation.T_amplitude != 0.0) {
        const double tf = 1.0 + std::abs(s.modulation.T_amplitude);
        st = MacroState::from_primitive(st.rho, st.U, st.Theta * tf, st.T_int * tf, s.params.delta);
    }
    return auto_bounds(st, s.params, s.auto_safety, s.auto_profile.value_or(default_profile(s.params.d)));
}

DistSnapshot initial_data(const Scenario& s, const PhaseGrid& grid) {
    if (!s.solver.transport) return DistSnapshot(sample_mixture(s.initial.components, s.params, grid));
    const auto& tc = *s.solver.transport;
    DistSnapshot F(grid.size(), tc.n_x, tc.dx);
    for (std::size_t i = 0; i < tc.n_x; ++i) {
        const double phase = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(tc.n_x);
        F.cell(i) = sample_mixture(modulated(s.initial.components, s.modulation, phase), s.params, grid);
    }
    return F;
}

SolverConfig resolve_solver(const Scenario& s, const DistSnapshot& f0, const PhaseGrid& grid) {
    SolverConfig c = s.solver;
    c.params = s.params;
    double A0 = 0.0;
    for (std::size_t i = 0; i < f0.n_x; ++i)
        A0 = std::max(A0, collision_frequency(compute_moments(f0.cell(i), grid), s.params));
    c.t_end = s.time.t_end ? *s.time.t_end : *s.time.A_t_end / A0;
    c.dt = s.time.steps ? c.t_end / *s.time.steps : *s.time.dt;
    if (c.dt > c.t_end) c.dt = c.t_end;
    validate(c);
    return c;
}

}  // namespace esbgk
