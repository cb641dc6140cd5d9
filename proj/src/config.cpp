#include "nlcl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "nlcl/snapshot_io.hpp"

namespace nlcl {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& fixed_keys()
{
    static const std::set<std::string> keys = {
        "domain.x0", "domain.y0", "domain.width", "domain.height", "dx", "dy",
        "cfl_mode", "cfl_safety", "t_end", "snapshot_every", "kernel_cutoff", "convolution",
        "r_max", "belt_speed", "belt_direction", "heaviside_slope", "sigma_tilde", "diverter_angle",
        "mollify_static_velocity", "seed",
        "diverter.enabled", "diverter.center_x", "diverter.center_y", "diverter.length", "diverter.width",
        "diverter.mass", "diverter.zero_velocity",
        "walls.enabled", "walls.thickness", "walls.mass",
        "boundary.left", "boundary.right", "boundary.bottom", "boundary.top",
        "initial.mode", "initial.particles.count", "initial.particles.region", "initial.particles.gamma",
        "initial.particles.rho_max", "initial.particles.positions", "initial.split_x", "initial.left_class",
        "initial.right_class", "initial.file",
        "output.directory", "output.formats",
        "diagnostics.entropy", "diagnostics.kernel_bounds",
        "metrics.exit_x", "metrics.crossing_x",
    };
    return keys;
}

const std::regex class_key(R"(class\.([0-9]+)\.(epsilon|sigma|alpha|r_max))");
const std::regex obstacle_key(
    R"(obstacle\.([0-9]+)\.(shape|x_lo|x_hi|y_lo|y_hi|center_x|center_y|length|width|angle|mass|zero_velocity))");

class Table {
public:
    explicit Table(const std::string& text)
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (!fixed_keys().count(key) && !std::regex_match(key, class_key) && !std::regex_match(key, obstacle_key))
                throw ConfigError("unknown key: " + key);
            if (!kv_.emplace(key, value).second)
                throw ConfigError("duplicate key: " + key);
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    const std::map<std::string, std::string>& all() const { return kv_; }

    std::string str(const std::string& key, const std::string& def) const
    {
        const auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }

    double num(const std::string& key, double def) const
    {
        const auto it = kv_.find(key);
        return it == kv_.end() ? def : parse_num(key, it->second);
    }

    double required_num(const std::string& key) const
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            throw ConfigError("missing required key: " + key);
        return parse_num(key, it->second);
    }

    long integer(const std::string& key, long def) const
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            return def;
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(it->second, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != it->second.size())
            throw ConfigError("key " + key + ": expected an integer, got '" + it->second + "'");
        return v;
    }

    bool boolean(const std::string& key, bool def) const
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            return def;
        const std::string& v = it->second;
        if (v == "true" || v == "yes" || v == "on" || v == "1")
            return true;
        if (v == "false" || v == "no" || v == "off" || v == "0")
            return false;
        throw ConfigError("key " + key + ": expected a boolean, got '" + v + "'");
    }

    static double parse_num(const std::string& key, const std::string& v)
    {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != v.size() || !std::isfinite(x))
            throw ConfigError("key " + key + ": expected a number, got '" + v + "'");
        return x;
    }

private:
    std::map<std::string, std::string> kv_;
};

std::vector<double> number_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        // Semicolons separate points in position lists.
        std::istringstream parts(item);
        std::string tok;
        while (std::getline(parts, tok, ';')) {
            std::istringstream ws(tok);
            std::string w;
            while (ws >> w)
                out.push_back(Table::parse_num(key, w));
        }
    }
    return out;
}

EdgePolicy edge_policy(const std::string& key, const std::string& v)
{
    if (v == "zero")
        return EdgePolicy::zero;
    if (v == "outflow")
        return EdgePolicy::outflow;
    if (v == "wall")
        return EdgePolicy::wall;
    throw ConfigError("key " + key + ": expected zero, outflow or wall, got '" + v + "'");
}

std::set<int> indices(const Table& t, const std::regex& re)
{
    std::set<int> out;
    std::smatch m;
    for (const auto& [k, v] : t.all())
        if (std::regex_match(k, m, re))
            out.insert(std::stoi(m[1].str()));
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    const Table t(text);
    RunConfig cfg;
    Scenario& s = cfg.scenario;

    const double x0 = t.num("domain.x0", 0.0), y0 = t.num("domain.y0", 0.0);
    const double width = t.num("domain.width", 1.2), height = t.num("domain.height", 0.6);
    const double dx = t.num("dx", 0.005);
    const double dy = t.num("dy", dx);
    if (!(width > 0.0) || !(height > 0.0))
        throw ConfigError("key domain.width/domain.height: extents must be positive");
    if (!(dx > 0.0))
        throw ConfigError("key dx: must be positive");
    if (!(dy > 0.0))
        throw ConfigError("key dy: must be positive");
    const long nx = std::lround(width / dx), ny = std::lround(height / dy);
    if (std::abs(nx * dx - width) > 1e-9 * width)
        throw ConfigError("key dx: domain.width is not a whole number of cells");
    if (std::abs(ny * dy - height) > 1e-9 * height)
        throw ConfigError("key dy: domain.height is not a whole number of cells");
    if (nx < 3 || ny < 3)
        throw ConfigError("key dx: the grid needs at least 3 cells per direction");
    s.grid = Grid(static_cast<int>(nx), static_cast<int>(ny), dx, dy, x0, y0);

    const std::string mode = t.str("cfl_mode", "positivity");
    if (mode == "positivity")
        cfg.cfl.mode = CflMode::positivity;
    else if (mode == "bv")
        cfg.cfl.mode = CflMode::bv;
    else
        throw ConfigError("key cfl_mode: expected positivity or bv, got '" + mode + "'");
    cfg.cfl.safety = t.num("cfl_safety", 0.9);
    if (!(cfg.cfl.safety > 0.0 && cfg.cfl.safety <= 1.0))
        throw ConfigError("key cfl_safety: must lie in (0, 1]");

    s.t_end = t.num("t_end", 6.0);
    cfg.snapshot_every = t.integer("snapshot_every", 50);
    if (cfg.snapshot_every < 1)
        throw ConfigError("key snapshot_every: must be at least 1");
    s.kernel_cutoff = t.num("kernel_cutoff", 5.0);
    const std::string conv = t.str("convolution", "fft");
    if (conv == "fft")
        cfg.convolution = ConvolutionMode::fft;
    else if (conv == "direct")
        cfg.convolution = ConvolutionMode::direct;
    else
        throw ConfigError("key convolution: expected fft or direct, got '" + conv + "'");

    s.r_max = t.num("r_max", 1.0);
    s.belt_speed = t.num("belt_speed", 0.1);
    s.belt_direction_deg = t.num("belt_direction", 0.0);
    s.heaviside_slope = t.num("heaviside_slope", 50.0);
    s.sigma_tilde = t.num("sigma_tilde", 9.0e4);
    s.diverter_angle = t.num("diverter_angle", 55.0);
    s.mollify_static_velocity = t.boolean("mollify_static_velocity", false);
    cfg.seed = static_cast<std::uint64_t>(t.integer("seed", 1));

    // Classes: default pair is a small (narrow kernel, unit weight) and a large class.
    const std::set<int> cls = indices(t, class_key);
    if (cls.empty()) {
        s.classes = {MaterialClass{1, 0.05, 3.0e4, 1.0, s.r_max}, MaterialClass{2, 0.05, 1.0e4, 2.0, s.r_max}};
    } else {
        int expect = 1;
        for (int id : cls) {
            if (id != expect)
                throw ConfigError("missing required key: class." + std::to_string(expect) + ".sigma");
            ++expect;
            const std::string p = "class." + std::to_string(id) + ".";
            MaterialClass mc;
            mc.id = id;
            mc.epsilon = t.num(p + "epsilon", 0.05);
            mc.sigma = t.required_num(p + "sigma");
            mc.alpha = t.num(p + "alpha", 1.0);
            mc.r_max_class = t.num(p + "r_max", s.r_max);
            s.classes.push_back(mc);
        }
    }

    const double ymax = y0 + height, xmax = x0 + width;
    if (t.boolean("walls.enabled", true)) {
        const double th = t.num("walls.thickness", 0.02);
        const double mass = t.num("walls.mass", 5.0);
        if (!(th > 0.0 && th < 0.5 * height))
            throw ConfigError("key walls.thickness: must be positive and below half the domain height");
        Obstacle lo, hi;
        lo.name = "wall_bottom";
        lo.rect = {x0, xmax, y0, y0 + th};
        hi.name = "wall_top";
        hi.rect = {x0, xmax, ymax - th, ymax};
        lo.mass = hi.mass = mass;
        s.obstacles.regions.push_back(lo);
        s.obstacles.regions.push_back(hi);
    }
    if (t.boolean("diverter.enabled", true)) {
        const double th = s.diverter_angle * std::acos(-1.0) / 180.0;
        Obstacle d;
        d.name = "diverter";
        d.shape = Obstacle::Shape::strip;
        d.length = t.num("diverter.length", 0.5);
        d.width = t.num("diverter.width", 0.02);
        // Default: upper end on the top edge at x = 0.7, running down and to the right.
        d.center.x = t.num("diverter.center_x", x0 + 0.7 + 0.5 * d.length * std::cos(th));
        d.center.y = t.num("diverter.center_y", ymax - 0.5 * d.length * std::sin(th));
        d.angle_deg = -s.diverter_angle;
        d.mass = t.num("diverter.mass", 5.0);
        d.zero_velocity = t.boolean("diverter.zero_velocity", true);
        s.obstacles.regions.push_back(d);
    }
    for (int id : indices(t, obstacle_key)) {
        const std::string p = "obstacle." + std::to_string(id) + ".";
        Obstacle o;
        o.name = "obstacle." + std::to_string(id);
        const std::string shape = t.str(p + "shape", "rectangle");
        if (shape == "rectangle") {
            o.shape = Obstacle::Shape::rectangle;
            o.rect = {t.required_num(p + "x_lo"), t.required_num(p + "x_hi"), t.required_num(p + "y_lo"),
                      t.required_num(p + "y_hi")};
        } else if (shape == "strip") {
            o.shape = Obstacle::Shape::strip;
            o.center = {t.required_num(p + "center_x"), t.required_num(p + "center_y")};
            o.length = t.required_num(p + "length");
            o.width = t.required_num(p + "width");
            o.angle_deg = t.num(p + "angle", 0.0);
        } else {
            throw ConfigError("key " + p + "shape: expected rectangle or strip, got '" + shape + "'");
        }
        o.mass = t.num(p + "mass", 5.0);
        o.zero_velocity = t.boolean(p + "zero_velocity", true);
        s.obstacles.regions.push_back(o);
    }

    s.boundary.left = edge_policy("boundary.left", t.str("boundary.left", "zero"));
    s.boundary.right = edge_policy("boundary.right", t.str("boundary.right", "outflow"));
    s.boundary.bottom = edge_policy("boundary.bottom", t.str("boundary.bottom", "zero"));
    s.boundary.top = edge_policy("boundary.top", t.str("boundary.top", "zero"));

    InitialConfig& in = cfg.initial;
    in.mode = t.str("initial.mode", "particles");
    if (in.mode != "particles" && in.mode != "file")
        throw ConfigError("key initial.mode: expected particles or file, got '" + in.mode + "'");
    const long count = t.integer("initial.particles.count", 192);
    if (count < 0)
        throw ConfigError("key initial.particles.count: must be nonnegative");
    in.count = static_cast<std::size_t>(count);
    if (t.has("initial.particles.region")) {
        const auto r = number_list("initial.particles.region", t.str("initial.particles.region", ""));
        if (r.size() != 4 || !(r[0] < r[1] && r[2] < r[3]))
            throw ConfigError("key initial.particles.region: expected x_lo, x_hi, y_lo, y_hi");
        in.region = {r[0], r[1], r[2], r[3]};
    }
    in.gamma = t.num("initial.particles.gamma", 200.0);
    in.rho_max = t.num("initial.particles.rho_max", 2004.0);
    if (!(in.gamma > 0.0))
        throw ConfigError("key initial.particles.gamma: must be positive");
    if (!(in.rho_max > 0.0))
        throw ConfigError("key initial.particles.rho_max: must be positive");
    if (t.has("initial.particles.positions")) {
        const auto v = number_list("initial.particles.positions", t.str("initial.particles.positions", ""));
        if (v.size() % 2 != 0)
            throw ConfigError("key initial.particles.positions: expected x y pairs");
        for (std::size_t k = 0; k < v.size(); k += 2)
            in.positions.push_back({v[k], v[k + 1]});
    }
    in.split_x = t.num("initial.split_x", 1.0 / 3.0);
    in.left_class = static_cast<int>(t.integer("initial.left_class", s.classes.size() >= 2 ? 2 : 1));
    in.right_class = static_cast<int>(t.integer("initial.right_class", 1));
    const int nc = static_cast<int>(s.classes.size());
    if (in.left_class < 1 || in.left_class > nc)
        throw ConfigError("key initial.left_class: no such class");
    if (in.right_class < 1 || in.right_class > nc)
        throw ConfigError("key initial.right_class: no such class");
    in.file = t.str("initial.file", "");
    if (in.mode == "file" && in.file.empty())
        throw ConfigError("missing required key: initial.file");

    cfg.output.directory = t.str("output.directory", "out");
    if (t.has("output.formats")) {
        cfg.output.csv = cfg.output.binary = false;
        std::istringstream fs(t.str("output.formats", ""));
        std::string f;
        while (std::getline(fs, f, ',')) {
            f = trim(f);
            if (f == "csv")
                cfg.output.csv = true;
            else if (f == "binary")
                cfg.output.binary = true;
            else
                throw ConfigError("key output.formats: unknown format '" + f + "'");
        }
    }
    cfg.diag_entropy = t.boolean("diagnostics.entropy", true);
    cfg.diag_kernel_bounds = t.boolean("diagnostics.kernel_bounds", true);
    cfg.exit_x = t.num("metrics.exit_x", xmax - 0.1);
    cfg.crossing_x = t.num("metrics.crossing_x", cfg.crossing_x);

    require_valid(s);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::vector<Field2D> initial_state(const RunConfig& cfg)
{
    const Scenario& s = cfg.scenario;
    const std::size_t nc = s.classes.size();
    if (cfg.initial.mode == "file") {
        Snapshot snap = read_snapshot_csv(cfg.initial.file, &s.grid);
        if (snap.rho.size() != nc)
            throw ConfigError("key initial.file: class count does not match the configured classes");
        return snap.rho;
    }
    const auto& in = cfg.initial;
    const std::vector<Vec2> pos = in.positions.empty() ? random_particles(in.count, in.region, cfg.seed) : in.positions;
    Field2D rho0 = init_from_particles(pos, in.gamma, in.rho_max, s.grid);
    const auto mask = obstacle_mask(s);
    for (std::size_t k = 0; k < mask.size(); ++k)
        if (mask[k])
            rho0.values()[k] = 0.0;

    std::vector<Field2D> out(nc, Field2D(s.grid, 0.0));
    if (nc == 1) {
        out[0] = rho0;
        return out;
    }
    auto [left, right] = split_classes(rho0, in.split_x);
    out[static_cast<std::size_t>(in.left_class - 1)] += left;
    out[static_cast<std::size_t>(in.right_class - 1)] += right;
    return out;
}

} // namespace nlcl
