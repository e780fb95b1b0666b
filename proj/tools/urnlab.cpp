// urnlab: batch analysis of balanced 2x2 urns with subtraction.
//
// Every run writes its data files and a manifest.json into --out. The manifest
// holds the spec, command and parameters; `urnlab replay` reruns it.

#include "urnlab/urnlab.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace urnlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* tool_version = "0.1.0";

enum Exit { ok = 0, usage = 1, tenability = 2, numeric = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rounds to 12 significant digits so JSON output carries no more than that.
double sig12(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string fmt12(const Real& x)
{
    return x.str(12);
}

json complex_json(Complex z)
{
    return json::array({sig12(z.real()), sig12(z.imag())});
}

struct SpecInput {
    std::optional<std::int64_t> a, b, s, a0, b0;
    std::string file;

    void attach(CLI::App* cmd)
    {
        auto* f = cmd->add_option("--spec", file, "urn spec JSON file with keys a, b, s, a0, b0");
        for (auto [name, slot] : {std::pair{"--a", &a}, {"--b", &b}, {"--s", &s}, {"--a0", &a0}, {"--b0", &b0}})
            cmd->add_option(name, *slot, std::string("inline spec: ") + (name + 2))->excludes(f);
    }

    UrnSpec resolve() const
    {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in)
                throw UsageError("cannot open spec file " + file);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw UsageError(std::string("spec file ") + file + ": " + e.what());
            }
            return j.get<UrnSpec>();
        }
        if (!a || !b || !s || !a0 || !b0)
            throw UsageError("give --spec FILE or all of --a --b --s --a0 --b0");
        return {*a, *b, *s, *a0, *b0};
    }
};

std::string write_file(const fs::path& dir, const std::string& name, const std::string& body)
{
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + (dir / name).string());
    out << body;
    return name;
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

json analyze(const UrnSpec& u)
{
    const auto dc = validate(u);
    const auto p = analytic_profile(u);
    const auto m = asymptotic_moments(u);
    const auto v = classify(u);
    json r;
    r["spec"] = u;
    r["tenable"] = true;
    r["h"] = dc.h;
    r["t0"] = dc.t0;
    r["balance_class"] = dc.balance_class;
    r["rho_beta"] = fmt12(p.rho_beta);
    r["rho_quadrature"] = fmt12(p.rho_quad);
    r["mean_slope"] = to_fraction_string(m.mean_slope);
    r["variance_slope"] = to_fraction_string(m.variance_slope);
    r["puiseux_exponent"] = to_fraction_string(p.puiseux_exponent);
    r["singular_exponent"] = to_fraction_string(p.singular_exponent);
    r["elliptic"] = verdict_json(u, v);
    const auto k = kite(u);
    json verts = json::array(), angles = json::array();
    for (int i = 0; i < 4; ++i) {
        verts.push_back(complex_json(k.vertices[i]));
        angles.push_back(sig12(k.angles[i]));
    }
    r["kite"] = {{"vertices", verts}, {"angles", angles}, {"polygon_kites", k.polygon_vertex_count}};
    return r;
}

/// Runs one command; returns the output file names written into dir.
json run(const std::string& command, const std::optional<UrnSpec>& spec, const json& params, const fs::path& dir)
{
    json outputs = json::array();
    std::ostringstream os;
    auto emit = [&](const std::string& name, const std::string& body) {
        outputs.push_back(write_file(dir, name, body));
        std::cout << body;
    };
    if (command == "analyze") {
        emit("analyze.json", dump(analyze(*spec)));
    } else if (command == "dist") {
        const auto d = exact_distribution(*spec, params.at("n").get<std::int64_t>());
        if (params.at("format") == "json") {
            emit("dist.json", dump(to_json_value(d)));
        } else {
            write_distribution_csv(os, d);
            emit("dist.csv", os.str());
        }
    } else if (command == "moments") {
        write_moment_csv(os, *spec, params.at("r_max").get<std::int64_t>(), params.at("n_max").get<std::int64_t>());
        emit("moments.csv", os.str());
    } else if (command == "rate") {
        write_rate_csv(os, rate_curve(*spec, params.at("grid").get<unsigned>()));
        emit("rate.csv", os.str());
    } else if (command == "simulate") {
        const SimConfig cfg{params.at("trials").get<std::uint64_t>(), params.at("n").get<std::int64_t>(),
                            params.at("seed").get<std::uint64_t>()};
        write_histogram_csv(os, simulate(*spec, cfg));
        emit("histogram.csv", os.str());
    } else if (command == "classify") {
        json verdicts = json::array();
        for (const auto& c : enumerate_elliptic(params.at("s_max").get<std::int64_t>()))
            verdicts.push_back(verdict_json(c.spec, classify(c.spec)));
        emit("classify.json", dump(verdicts));
    } else if (command == "kite") {
        write_boundary_csv(os, polygon_boundary_points(*spec, params.at("samples").get<unsigned>()));
        emit("kite.csv", os.str());
    } else {
        throw UsageError("unknown command in manifest: " + command);
    }
    return outputs;
}

void execute(const std::string& command, const std::optional<UrnSpec>& spec, json params, const fs::path& dir)
{
    fs::create_directories(dir);
    PrecisionScope scope(params.value("precision_digits", requested_precision_digits()));
    params["precision_digits"] = params.value("precision_digits", requested_precision_digits());
    json manifest;
    manifest["spec"] = spec ? json(*spec) : json(nullptr);
    manifest["command"] = command;
    manifest["parameters"] = params;
    manifest["tool_version"] = tool_version;
    manifest["outputs"] = run(command, spec, params, dir);
    write_file(dir, "manifest.json", dump(manifest));
}

int report(Exit code, const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
    return code;
}

Exit exit_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::TenabilityViolation: return tenability;
    case ErrorKind::NonPositiveParameter:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange: return usage;
    default: return numeric;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and asymptotic analysis of balanced 2x2 urns with subtraction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    std::string out_dir = "urnlab-out";
    SpecInput spec_in;
    json params;
    std::string command;
    bool needs_spec = true;

    auto add = [&](const std::string& name, const std::string& help) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("--out", out_dir, "output directory for data files and manifest.json")
            ->capture_default_str();
        c->callback([&command, name] { command = name; });
        return c;
    };

    std::int64_t n = 10, r_max = 3, n_max = 20, s_max = 10;
    unsigned grid = 20, samples = 64;
    std::uint64_t trials = 10000, seed = 1;
    std::string format = "csv";
    std::string manifest_path;

    auto* analyze_cmd = add("analyze", "tenability, constants, rho, slopes, elliptic verdict and kite");
    spec_in.attach(analyze_cmd);

    auto* dist_cmd = add("dist", "exact law of the black count at time n");
    spec_in.attach(dist_cmd);
    dist_cmd->add_option("--n", n, "time")->capture_default_str();
    dist_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* moments_cmd = add("moments", "exact against closed-form factorial moments");
    spec_in.attach(moments_cmd);
    moments_cmd->add_option("--r-max", r_max, "largest moment order")->capture_default_str();
    moments_cmd->add_option("--n-max", n_max, "largest time")->capture_default_str();

    auto* rate_cmd = add("rate", "large-deviation rate on a grid below the mean");
    spec_in.attach(rate_cmd);
    rate_cmd->add_option("--grid", grid, "number of points")->capture_default_str();

    auto* sim_cmd = add("simulate", "seeded Monte Carlo histogram of the black count");
    spec_in.attach(sim_cmd);
    sim_cmd->add_option("--trials", trials, "number of runs")->capture_default_str();
    sim_cmd->add_option("--n", n, "time horizon")->capture_default_str();
    sim_cmd->add_option("--seed", seed, "base seed")->capture_default_str();

    auto* classify_cmd = add("classify", "enumerate the elliptic urns with s <= s_max");
    classify_cmd->add_option("--s-max", s_max, "largest s")->capture_default_str();

    auto* kite_cmd = add("kite", "boundary of the fundamental polygon");
    spec_in.attach(kite_cmd);
    kite_cmd->add_option("--samples", samples, "points per edge")->capture_default_str();

    auto* replay_cmd = add("replay", "rerun a manifest");
    replay_cmd->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(usage, "UsageError", e.what());
    }

    try {
        if (command == "replay") {
            std::ifstream in(manifest_path);
            if (!in)
                throw UsageError("cannot open manifest " + manifest_path);
            json m;
            try {
                m = json::parse(in);
            } catch (const json::parse_error& e) {
                throw UsageError(std::string("manifest: ") + e.what());
            }
            std::optional<UrnSpec> spec;
            if (!m.at("spec").is_null())
                spec = m.at("spec").get<UrnSpec>();
            execute(m.at("command").get<std::string>(), spec, m.at("parameters"), out_dir);
            return ok;
        }
        if (command == "classify")
            needs_spec = false;
        std::optional<UrnSpec> spec;
        if (needs_spec) {
            spec = spec_in.resolve();
            validate(*spec);
        }
        if (command == "dist")
            params = {{"n", n}, {"format", format}};
        else if (command == "moments")
            params = {{"r_max", r_max}, {"n_max", n_max}};
        else if (command == "rate")
            params = {{"grid", grid}};
        else if (command == "simulate")
            params = {{"trials", trials}, {"n", n}, {"seed", seed}};
        else if (command == "classify")
            params = {{"s_max", s_max}};
        else if (command == "kite")
            params = {{"samples", samples}};
        else
            params = json::object();
        execute(command, spec, params, out_dir);
        return ok;
    } catch (const UsageError& e) {
        return report(usage, "UsageError", e.what());
    } catch (const UrnError& e) {
        return report(exit_for(e.kind()), std::string(to_string(e.kind())), e.what());
    } catch (const json::exception& e) {
        return report(usage, "ParseError", e.what());
    } catch (const std::exception& e) {
        return report(numeric, "InternalError", e.what());
    }
}
