#include "nsch/config.hpp"

#include "nsch/errors.hpp"
#include "nsch/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace nsch {

namespace {

using Slot = std::variant<double*, int*, long*, bool*, std::string*, std::vector<double>*, std::uint64_t*, SigmaForm*>;

std::vector<std::pair<std::string, Slot>> slots(RunConfig& c)
{
    return {
        {"grid.mode", &c.grid.mode},
        {"grid.nx", &c.grid.nx},
        {"grid.ny", &c.grid.ny},
        {"grid.lx", &c.grid.lx},
        {"grid.ly", &c.grid.ly},
        {"potential.kind", &c.potential.kind},
        {"potential.theta", &c.potential.theta},
        {"potential.theta_c", &c.potential.theta_c},
        {"potential.eps", &c.potential.eps},
        {"model.eta1", &c.model.eta1},
        {"model.eta2", &c.model.eta2},
        {"model.m_lo", &c.model.m_lo},
        {"model.m_hi", &c.model.m_hi},
        {"model.chi", &c.model.chi},
        {"model.kappa", &c.model.kappa},
        {"model.alpha", &c.model.alpha},
        {"model.h_const", &c.model.h_const},
        {"model.b_star", &c.model.b_star},
        {"model.eps_interface", &c.model.eps_interface},
        {"model.gamma_plap", &c.model.gamma_plap},
        {"model.sigma_eq_form", &c.model.sigma_form},
        {"init.gamma", &c.init.gamma},
        {"init.n_mollify", &c.init.n_mollify},
        {"init.phi", &c.init.phi},
        {"init.phi_mean", &c.init.phi_mean},
        {"init.phi_amp", &c.init.phi_amp},
        {"init.phi_width", &c.init.phi_width},
        {"init.phi_radius", &c.init.phi_radius},
        {"init.phi_kcut", &c.init.phi_kcut},
        {"init.phi_mode", &c.init.phi_mode},
        {"init.sigma", &c.init.sigma},
        {"init.sigma_base", &c.init.sigma_base},
        {"init.sigma_amp", &c.init.sigma_amp},
        {"init.sigma_width", &c.init.sigma_width},
        {"init.sigma_mode", &c.init.sigma_mode},
        {"init.velocity", &c.init.velocity},
        {"init.velocity_amp", &c.init.velocity_amp},
        {"init.velocity_kcut", &c.init.velocity_kcut},
        {"init.snapshot", &c.init.snapshot},
        {"scheme.dt", &c.scheme.dt},
        {"scheme.t_end", &c.scheme.t_end},
        {"scheme.K", &c.scheme.K},
        {"scheme.imex_order", &c.scheme.imex_order},
        {"scheme.stabilize", &c.scheme.stabilize},
        {"scheme.stab_shift", &c.scheme.stab_shift},
        {"scheme.max_halvings", &c.scheme.max_halvings},
        {"scheme.residual_trigger", &c.scheme.residual_trigger},
        {"scheme.entropy_floor", &c.scheme.entropy_floor},
        {"output.dir", &c.output.dir},
        {"output.diag_interval", &c.output.diag_interval},
        {"output.snapshot_interval", &c.output.snapshot_interval},
        {"check.eps", &c.check.eps},
        {"check.chi", &c.check.chi},
        {"twin.delta_ladder", &c.twin.delta_ladder},
        {"twin.record_interval", &c.twin.record_interval},
        {"seed", &c.seed},
    };
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(const std::string& s, T& out)
{
    const char* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

bool parse_bool(const std::string& s, bool& out)
{
    if (s == "true" || s == "1" || s == "on" || s == "yes")
        return out = true, true;
    if (s == "false" || s == "0" || s == "off" || s == "no")
        return out = false, true;
    return false;
}

struct Assign {
    const std::string& text;
    bool operator()(double* p) const { return parse_number(text, *p); }
    bool operator()(int* p) const { return parse_number(text, *p); }
    bool operator()(long* p) const { return parse_number(text, *p); }
    bool operator()(std::uint64_t* p) const { return parse_number(text, *p); }
    bool operator()(bool* p) const { return parse_bool(text, *p); }
    bool operator()(std::string* p) const
    {
        *p = text;
        if (p->size() >= 2 && p->front() == '"' && p->back() == '"')
            *p = p->substr(1, p->size() - 2);
        return true;
    }
    bool operator()(std::vector<double>* p) const
    {
        try {
            *p = parse_real_list(text);
        } catch (const ConfigError&) {
            return false;
        }
        return true;
    }
    bool operator()(SigmaForm* p) const
    {
        try {
            *p = sigma_form_from_string(text);
        } catch (const ParameterError&) {
            return false;
        }
        return true;
    }
};

struct Print {
    std::string operator()(const double* p) const { return format_real(*p); }
    std::string operator()(const int* p) const { return std::to_string(*p); }
    std::string operator()(const long* p) const { return std::to_string(*p); }
    std::string operator()(const std::uint64_t* p) const { return std::to_string(*p); }
    std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
    std::string operator()(const std::string* p) const { return *p; }
    std::string operator()(const std::vector<double>* p) const
    {
        std::string s;
        for (std::size_t i = 0; i < p->size(); ++i)
            s += (i ? "," : "") + format_real((*p)[i]);
        return s;
    }
    std::string operator()(const SigmaForm* p) const { return to_string(*p); }
};

const char* type_name(const Slot& s)
{
    switch (s.index()) {
    case 0: return "a real number";
    case 1:
    case 2:
    case 6: return "an integer";
    case 3: return "a boolean";
    case 5: return "a comma-separated list of reals";
    case 7: return "cross_diffusion or linear_transport";
    default: return "a string";
    }
}

template <class F>
void config_check(bool ok, F&& message)
{
    if (!ok)
        throw ConfigError(message());
}

bool one_of(const std::string& v, std::initializer_list<const char*> options)
{
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
}

} // namespace

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        double v = 0.0;
        if (!parse_number(item, v))
            throw ConfigError("'" + item + "' is not a real number");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    RunConfig cfg;
    auto table = slots(cfg);
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty())
            continue;
        const auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
        const auto eq = body.find('=');
        config_check(eq != std::string::npos, [&] { return where() + "expected 'key = value', got '" + body + "'"; });
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        config_check(!key.empty(), [&] { return where() + "missing key"; });
        config_check(!value.empty(), [&] { return where() + "missing value for '" + key + "'"; });
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& kv) { return kv.first == key; });
        config_check(it != table.end(), [&] { return where() + "unknown key '" + key + "'"; });
        config_check(seen.emplace(key, lineno).second, [&] {
            return where() + "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")";
        });
        config_check(std::visit(Assign{value}, it->second), [&] {
            return where() + "invalid value '" + value + "' for '" + key + "' (expected " + type_name(it->second) + ")";
        });
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void RunConfig::validate() const
{
    try {
        config_check(one_of(grid.mode, {"periodic_torus", "neumann_rectangle"}),
                     [&] { return "grid.mode must be periodic_torus or neumann_rectangle, got '" + grid.mode + "'"; });
        const GridPtr g = make_grid();
        config_check(one_of(potential.kind, {"regularized", "quartic", "singular"}),
                     [&] { return "potential.kind must be regularized, quartic or singular"; });
        PotentialParams::flory_huggins(potential.theta, potential.theta_c).validate_flory_huggins();
        make_potential();
        model.validate();
        scheme.validate(*g);

        config_check(init.gamma == 0.0 || (init.gamma > 0.0 && init.gamma <= 0.5),
                     [] { return "init.gamma must be 0 (off) or lie in (0, 1/2]"; });
        config_check(init.n_mollify >= 0, [] { return "init.n_mollify must be >= 0"; });
        config_check(one_of(init.phi, {"random", "stripe", "droplet", "constant", "cosine", "snapshot"}),
                     [&] { return "init.phi: unknown generator '" + init.phi + "'"; });
        config_check(one_of(init.sigma, {"constant", "gaussian", "cosine"}),
                     [&] { return "init.sigma: unknown generator '" + init.sigma + "'"; });
        config_check(one_of(init.velocity, {"zero", "taylor_green", "random"}),
                     [&] { return "init.velocity: unknown generator '" + init.velocity + "'"; });
        config_check(init.phi != "snapshot" || !init.snapshot.empty(),
                     [] { return "init.phi = snapshot requires init.snapshot"; });
        config_check(init.phi_width > 0 && init.sigma_width > 0 && init.phi_radius > 0,
                     [] { return "init widths and radius must be positive"; });
        config_check(init.phi_kcut > 0 && init.velocity_kcut > 0, [] { return "init cutoffs must be positive"; });
        config_check(g->periodic() || init.velocity == "zero",
                     [] { return "init.velocity: the neumann_rectangle is fluid-free"; });

        config_check(output.diag_interval >= 1, [] { return "output.diag_interval must be >= 1"; });
        config_check(output.snapshot_interval >= 0, [] { return "output.snapshot_interval must be >= 0"; });
        config_check(!output.dir.empty(), [] { return "output.dir must not be empty"; });
        config_check(twin.record_interval >= 1, [] { return "twin.record_interval must be >= 1"; });
        for (double d : twin.delta_ladder)
            config_check(d >= 0.0 && std::isfinite(d), [] { return "twin.delta_ladder entries must be >= 0"; });
        for (double e : check.eps)
            config_check(e > 0.0 && e < 1.0, [] { return "check.eps entries must lie in (0, 1)"; });
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

GridPtr RunConfig::make_grid() const
{
    return Grid::create(domain_mode_from_string(grid.mode), grid.lx, grid.ly, grid.nx, grid.ny);
}

PhasePotential RunConfig::make_potential() const
{
    const PotentialParams p = PotentialParams::flory_huggins(potential.theta, potential.theta_c);
    if (potential.kind == "quartic")
        return PhasePotential::quartic();
    if (potential.kind == "singular")
        return PhasePotential::singular(p);
    return PhasePotential::regularized(RegPotential(p, potential.eps, model.chi));
}

Model RunConfig::make_model() const
{
    Model m;
    m.params = model;
    m.potential = make_potential();
    m.K = scheme.K;
    return m;
}

double RunConfig::requested_K(const Grid& g) const { return scheme.K > 0.0 ? scheme.K : g.dealias_radius(); }

InitialData RunConfig::make_initial_data(const GridPtr& g) const
{
    Rng rng(seed);
    InitialData raw;
    raw.gamma = init.gamma;
    raw.n_mollify = init.n_mollify;

    if (init.phi == "snapshot") {
        const State s = state_from_snapshot(read_snapshot(init.snapshot), g);
        raw.phi0 = s.phi;
        raw.sigma0 = s.sigma;
        if (s.has_velocity())
            raw.v0 = s.v;
        return raw;
    }

    if (init.phi == "random")
        raw.phi0 = random_phase(g, init.phi_mean, init.phi_amp, init.phi_kcut, rng);
    else if (init.phi == "stripe")
        raw.phi0 = stripe(g, init.phi_mean, init.phi_amp, init.phi_width);
    else if (init.phi == "droplet")
        raw.phi0 = droplet(g, init.phi_mean, init.phi_amp, init.phi_width, init.phi_radius);
    else if (init.phi == "cosine")
        raw.phi0 = cosine_mode(g, init.phi_mean, init.phi_amp, init.phi_mode);
    else
        raw.phi0 = ScalarField(g, init.phi_mean);

    if (init.sigma == "gaussian")
        raw.sigma0 = gaussian_blob(g, init.sigma_base, init.sigma_amp, init.sigma_width);
    else if (init.sigma == "cosine")
        raw.sigma0 = cosine_mode(g, init.sigma_base, init.sigma_amp, init.sigma_mode);
    else
        raw.sigma0 = ScalarField(g, init.sigma_base);

    if (init.velocity == "taylor_green")
        raw.v0 = taylor_green(g, init.velocity_amp);
    else if (init.velocity == "random")
        raw.v0 = random_velocity(g, init.velocity_amp, init.velocity_kcut, rng);
    return raw;
}

std::string RunConfig::canonical() const
{
    auto table = slots(const_cast<RunConfig&>(*this));
    std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (const auto& [key, slot] : table)
        out += key + " = " + std::visit(Print{}, slot) + "\n";
    return out;
}

std::string RunConfig::fingerprint() const
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    // where the files land does not change what they contain
    std::istringstream in(canonical());
    std::string line, text;
    while (std::getline(in, line))
        if (line.rfind("output.dir = ", 0) != 0)
            text += line + '\n';
    os << fnv1a64(text);
    return os.str();
}

} // namespace nsch
