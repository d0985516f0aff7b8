#include "commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqent/seqent.hpp"

namespace seqent::cli {

const char* const kVersion = SEQENT_VERSION;

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double parse_plain(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("not a number: '" + std::string(s) + "'");
    return v;
}

template <class Int>
Int parse_integer(std::string_view s, const char* what) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError(std::string("not a ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

double parse_real(std::string_view text) {
    double v;
    const auto pos = text.find("pi");
    if (pos == std::string_view::npos) {
        v = parse_plain(text);
    } else {
        std::string_view coef = text.substr(0, pos);
        if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
        const double c = coef.empty() ? 1.0 : coef == "-" ? -1.0 : parse_plain(coef);
        const std::string_view rest = text.substr(pos + 2);
        double d = 1.0;
        if (!rest.empty()) {
            if (rest.front() != '/') throw UsageError("not a number: '" + std::string(text) + "'");
            d = parse_plain(rest.substr(1));
        }
        v = c * std::numbers::pi / d;
    }
    if (!std::isfinite(v)) throw UsageError("not a finite number: '" + std::string(text) + "'");
    return v;
}

std::size_t parse_count(std::string_view text) { return parse_integer<std::size_t>(text, "count"); }

std::uint64_t parse_seed(std::string_view text) { return parse_integer<std::uint64_t>(text, "seed"); }

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_real(trim(text.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_real(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

Config parse_config_text(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        if (!cfg.emplace(key, value).second) throw UsageError("config: duplicate key '" + key + "'");
    }
    return cfg;
}

Config read_config_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

struct KeySpec {
    std::string name;
    std::optional<std::string> fallback;
    std::string help;
};

struct Context {
    Config values;
    std::ostream& out;
    std::ostream& err;
    std::vector<fs::path> outputs;
    std::optional<std::uint64_t> seed;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const std::string& get(const std::string& key) const {
        const auto it = values.find(key);
        if (it == values.end()) throw UsageError("missing required --" + key);
        return it->second;
    }
    double real(const std::string& key) const { return parse_real(get(key)); }
    std::size_t count(const std::string& key) const { return parse_count(get(key)); }
    fs::path out_path() const { return get("out"); }

    void write(const fs::path& path, const std::string& content) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write " + path.string());
        f << content;
        if (!f) throw UsageError("failed writing " + path.string());
        outputs.push_back(path);
    }
};

struct Command {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;
    std::function<int(Context&)> body;
};

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) text_ += ',';
            text_ += h;
            first = false;
        }
        text_ += '\n';
    }

    template <class... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
        text_ += '\n';
    }

    const std::string& text() const { return text_; }

private:
    static std::string cell(double v) { return format_real(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }

    std::string text_;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points < 2) throw UsageError("--points must be at least 2");
    if (!(lo <= hi)) throw UsageError("empty range: min > max");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

std::vector<double> lambda_grid(const Context& ctx) {
    if (ctx.has("lambda")) return parse_real_list(ctx.get("lambda"));
    return linear_grid(ctx.real("lambda-min"), ctx.real("lambda-max"), ctx.count("points"));
}

std::vector<double> x_grid(const Context& ctx) {
    std::vector<double> xs;
    if (ctx.has("x")) {
        xs = parse_real_list(ctx.get("x"));
    } else {
        const double lo = ctx.real("x-min"), hi = ctx.real("x-max");
        if (!(lo <= hi)) throw UsageError("empty range: x-min > x-max");
        for (double x = lo; x <= hi + 1e-9; x += 1.0) xs.push_back(x);
    }
    for (double x : xs)
        if (x < 0.0) throw UsageError("x values must be >= 0");
    return xs;
}

ProtocolConfig capped_config(std::size_t cap) {
    if (cap == 0) throw UsageError("--cap must be positive");
    if (cap > kDefaultRoundCap) throw CapExceeded("--cap exceeds the protocol limit of " + std::to_string(kDefaultRoundCap));
    ProtocolConfig c;
    c.max_rounds = cap;
    return c;
}

int cmd_sweep_single(Context& ctx) {
    const auto grid = linear_grid(ctx.real("lambda-min"), ctx.real("lambda-max"), ctx.count("points"));
    Csv csv{"lambda", "e_cd_1", "e_ab_1", "sum"};
    for (const auto& r : sweep(ProtocolConfig{}, grid, 1)) csv.row(r.lambda, r.e_cd, r.e_ab, r.e_cd + r.e_ab);
    ctx.write(ctx.out_path(), csv.text());
    ctx.out << "wrote " << grid.size() << " rows to " << ctx.out_path().string() << "\n";
    return kExitOk;
}

int cmd_sweep_multi(Context& ctx) {
    const auto grid = lambda_grid(ctx);
    const std::size_t rounds = ctx.count("rounds");
    if (rounds == 0) throw UsageError("--rounds must be positive");
    const ProtocolConfig config = capped_config(ctx.count("cap"));
    if (rounds > config.max_rounds)
        throw CapExceeded("--rounds " + std::to_string(rounds) + " exceeds --cap " + std::to_string(config.max_rounds));
    Csv csv{"lambda", "n", "e_cd_n", "e_ab_n"};
    for (const auto& r : sweep(config, grid, rounds)) csv.row(r.lambda, r.n, r.e_cd, r.e_ab);
    ctx.write(ctx.out_path(), csv.text());
    ctx.out << "wrote " << grid.size() * rounds << " rows to " << ctx.out_path().string() << "\n";
    return kExitOk;
}

int cmd_count(Context& ctx) {
    const double lambda = ctx.real("lambda");
    const auto xs = x_grid(ctx);
    const std::size_t cap = ctx.count("cap");
    capped_config(cap);
    const ComplexMatrix u = build_xxyy({lambda});
    Csv csv{"x", "n"};
    for (double x : xs) {
        const CountResult c = count_pairs(u, x, cap);
        csv.row(x, c.n);
        if (c.saturated) ctx.err << "note: x=" << format_real(x) << " reached the cap of " << cap << " rounds\n";
    }
    ctx.write(ctx.out_path(), csv.text());
    ctx.out << "wrote " << xs.size() << " rows to " << ctx.out_path().string() << "\n";
    return kExitOk;
}

json score_json(const PairScore& s) { return {{"n", s.n}, {"margin", s.margin}, {"witness", s.witness}}; }

json result_json(double x, const OptimizeResult& r) {
    json restarts = json::array();
    for (const auto& log : r.restarts) {
        restarts.push_back({{"index", log.index},
                            {"start", log.start},
                            {"theta", log.theta},
                            {"search_score", score_json(log.search_score)},
                            {"final_score", score_json(log.final_score)},
                            {"evals", log.evals},
                            {"budget_exhausted", log.budget_exhausted}});
    }
    return {{"x", x},
            {"best_n", r.best_n},
            {"tie_margin", r.tie_margin},
            {"saturated", r.saturated},
            {"eval_count", r.eval_count},
            {"best_theta", r.best_theta},
            {"restarts", restarts}};
}

int cmd_optimize(Context& ctx) {
    auto xs = x_grid(ctx);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    OptimizeRequest base;
    base.restarts = ctx.count("restarts");
    if (base.restarts == 0) throw UsageError("--restarts must be positive");
    base.max_evals = ctx.count("max-evals");
    base.seed = parse_seed(ctx.get("seed"));
    base.round_cap = ctx.count("search-cap");
    base.final_cap = ctx.count("cap");
    capped_config(base.final_cap);
    capped_config(base.round_cap);
    ctx.seed = base.seed;

    Csv csv{"x", "best_n", "margin"};
    json results = json::array();
    std::vector<Theta> warm;
    for (double x : xs) {
        OptimizeRequest req = base;
        req.x = x;
        req.warm_starts = warm;
        const OptimizeResult r = maximize_pairs(req);
        csv.row(x, r.best_n, r.tie_margin);
        results.push_back(result_json(x, r));
        warm = {r.best_theta};
        ctx.out << "x=" << format_real(x) << " best_n=" << r.best_n << (r.saturated ? " (cap)" : "") << "\n";
    }
    const fs::path out = ctx.out_path();
    ctx.write(out, csv.text());
    ctx.write(fs::path(out.string() + ".results.json"), results.dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(Context& ctx) {
    const std::size_t n_target = ctx.count("n-target");
    if (n_target == 0) throw UsageError("--n-target must be at least 1");
    std::optional<double> t;
    if (ctx.has("t")) {
        t = ctx.real("t");
    } else {
        t = find_t(n_target);
    }
    Csv csv{"round", "e_cd", "min_pt_eigenvalue", "margin"};
    if (!t) {
        ctx.write(ctx.out_path(), csv.text());
        ctx.out << "no admissible t found in (0, pi/8] for " << n_target << " rounds\n";
        return kExitFailure;
    }
    const TheoremOutcome outcome = verify_theorem(n_target, *t);
    const auto& rounds = std::visit([](const auto& o) -> const std::vector<RoundCheck>& { return o.rounds; }, outcome);
    ctx.out << "t = " << format_real(*t) << "\n";
    for (const auto& r : rounds) {
        const std::string margin = r.margin ? format_real(*r.margin) : std::string();
        csv.row(r.round, r.e_cd, r.min_pt_eigenvalue, margin);
        ctx.out << "round " << r.round << " e_cd=" << format_real(r.e_cd)
                << (r.margin ? " margin=" + margin : std::string()) << "\n";
    }
    ctx.write(ctx.out_path(), csv.text());
    if (const auto* fail = std::get_if<TheoremFailure>(&outcome)) {
        const auto& last = fail->rounds.back();
        ctx.out << "FAILED at round " << fail->round << ": " << fail->reason;
        if (last.margin) ctx.out << " (margin " << format_real(*last.margin) << ")";
        ctx.out << "\n";
        return kExitFailure;
    }
    ctx.out << "certified " << n_target << " rounds\n";
    return kExitOk;
}

const std::vector<Command>& commands() {
    static const std::vector<Command> list{
        {"sweep-single",
         "E_CD and E_AB after one round over a lambda range",
         {{"lambda-min", "0", "range start"},
          {"lambda-max", "pi/2", "range end"},
          {"points", "101", "grid points (>= 2)"},
          {"out", std::nullopt, "CSV output path"}},
         cmd_sweep_single},
        {"sweep-multi",
         "E_CD and E_AB per round, long format",
         {{"lambda", std::nullopt, "comma-separated lambda list (overrides the range)"},
          {"lambda-min", "0", "range start"},
          {"lambda-max", "pi/2", "range end"},
          {"points", "9", "grid points (>= 2)"},
          {"rounds", "10", "rounds per lambda"},
          {"cap", "10000", "round cap"},
          {"out", std::nullopt, "CSV output path"}},
         cmd_sweep_multi},
        {"count",
         "pairs receiving at least 2^-x ebits at fixed lambda",
         {{"lambda", std::nullopt, "interaction strength"},
          {"x", std::nullopt, "comma-separated x list (overrides the range)"},
          {"x-min", "1", "first x (step 1)"},
          {"x-max", "12", "last x"},
          {"cap", "10000", "round cap"},
          {"out", std::nullopt, "CSV output path"}},
         cmd_count},
        {"optimize",
         "maximize the pair count over general two-qubit gates",
         {{"x", std::nullopt, "comma-separated x list (overrides the range)"},
          {"x-min", "0", "first x (step 1)"},
          {"x-max", "10", "last x"},
          {"restarts", "8", "random starts per x"},
          {"seed", "1", "64-bit seed"},
          {"max-evals", "3000", "objective evaluations per start"},
          {"search-cap", "500", "round cap while searching"},
          {"cap", "10000", "round cap for the final count"},
          {"out", std::nullopt, "CSV output path"}},
         cmd_optimize},
        {"verify",
         "certify that the first n-target pairs all end up entangled",
         {{"n-target", std::nullopt, "number of pairs"},
          {"t", std::nullopt, "interaction strength (default: search)"},
          {"out", std::nullopt, "CSV output path"}},
         cmd_verify},
    };
    return list;
}

Config resolve(const Command& cmd, const CLI::App& sub, const std::map<std::string, std::string>& flags,
               const std::string& config_path) {
    Config values;
    for (const auto& k : cmd.keys)
        if (k.fallback) values[k.name] = *k.fallback;
    if (!config_path.empty()) {
        for (const auto& [key, value] : read_config_file(config_path)) {
            const bool known = std::any_of(cmd.keys.begin(), cmd.keys.end(), [&](const KeySpec& k) { return k.name == key; });
            if (!known) throw UsageError("config: unknown key '" + key + "' for " + cmd.name);
            values[key] = value;
        }
    }
    for (const auto& k : cmd.keys)
        if (sub.get_option("--" + k.name)->count() > 0) values[k.name] = flags.at(k.name);
    return values;
}

int execute(const Command& cmd, Config values, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    Context ctx{std::move(values), out, err, {}, std::nullopt};
    const fs::path out_path = ctx.out_path();
    const int code = cmd.body(ctx);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = out_path.parent_path();
    json outputs = json::array();
    for (const auto& p : ctx.outputs)
        outputs.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
    json manifest = {{"command", cmd.name},
                     {"config", ctx.values},
                     {"seed", ctx.seed ? json(*ctx.seed) : json(nullptr)},
                     {"version", kVersion},
                     {"wall_time", wall},
                     {"exit_code", code},
                     {"outputs", outputs}};
    std::ofstream f(fs::path(out_path.string() + ".manifest.json"), std::ios::binary | std::ios::trunc);
    f << manifest.dump(2) << "\n";
    return code;
}

int replay(const fs::path& manifest_path, bool keep, std::ostream& out, std::ostream& err) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw UsageError("cannot read manifest " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("bad manifest: " + std::string(e.what()));
    }
    const fs::path dir = manifest_path.parent_path();
    const std::string command = manifest.at("command").get<std::string>();
    const auto config = manifest.at("config").get<Config>();
    if (!config.count("out")) throw UsageError("manifest config has no out");

    const fs::path replay_out = dir / (fs::path(config.at("out")).filename().string() + ".replay");
    std::vector<std::string> args{command};
    for (const auto& [key, value] : config) {
        args.push_back("--" + key);
        args.push_back(key == "out" ? replay_out.string() : value);
    }
    std::ostringstream sink;
    const int code = run(args, sink, err);
    const fs::path replay_manifest = replay_out.string() + ".manifest.json";
    if (!fs::exists(replay_manifest)) {
        err << "replay did not complete (exit " << code << ")\n";
        return kExitFailure;
    }
    std::ifstream rin(replay_manifest, std::ios::binary);
    const json again = json::parse(rin);

    const auto& want = manifest.at("outputs");
    const auto& got = again.at("outputs");
    bool ok = want.size() == got.size() && manifest.value("exit_code", code) == code;
    for (std::size_t i = 0; i < std::min(want.size(), got.size()); ++i) {
        const bool same = want[i].at("sha256") == got[i].at("sha256");
        ok = ok && same;
        out << (same ? "match    " : "MISMATCH ") << want[i].at("path").get<std::string>() << "\n";
    }
    if (!keep) {
        for (const auto& o : got) fs::remove(dir / o.at("path").get<std::string>());
        fs::remove(replay_manifest);
    }
    out << (ok ? "replay reproduced all outputs\n" : "replay differs\n");
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential entanglement transfer simulator", "seqent"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::map<std::string, std::map<std::string, std::string>> flags;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        for (const auto& k : cmd.keys) {
            std::string help = k.help;
            if (k.fallback) help += " [" + *k.fallback + "]";
            sub->add_option("--" + k.name, flags[cmd.name][k.name], help);
        }
        sub->add_option("--config", config_paths[cmd.name], "flat key = value file; flags override it");
        subs[cmd.name] = sub;
    }
    std::string manifest;
    bool keep = false;
    CLI::App* replay_sub = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay_sub->add_option("manifest", manifest, "path to <out>.manifest.json")->required();
    replay_sub->add_flag("--keep", keep, "keep the replayed files");

    std::vector<const char*> argv{"seqent"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (replay_sub->parsed()) return replay(manifest, keep, out, err);
        for (const auto& cmd : commands()) {
            if (!subs[cmd.name]->parsed()) continue;
            return execute(cmd, resolve(cmd, *subs[cmd.name], flags[cmd.name], config_paths[cmd.name]), out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace seqent::cli
