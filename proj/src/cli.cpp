#include "cdeal/cli.hpp"

#include "cdeal/algebra.hpp"
#include "cdeal/estimation.hpp"
#include "cdeal/pricing.hpp"
#include "cdeal/scenario.hpp"
#include "cdeal/sensitivity.hpp"
#include "cdeal/serialize.hpp"
#include "cdeal/spectral.hpp"
#include "cdeal/transforms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace cdeal::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

double usage_number(const std::string& text, const std::string& where) {
    try {
        return parse_number(text, where);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
}

int usage_int(const std::string& text, const std::string& where) {
    const double v = usage_number(text, where);
    if (v != static_cast<double>(static_cast<int>(v))) throw UsageError(where + ": expected an integer");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

Json load_json_file(const std::string& path) {
    return parse_json_strict(read_text_file(path), path);
}

// Parsed --group value; explicit measure lists need the scenario space.
struct GroupSpec {
    std::string text;
    std::optional<WeightingMeasure> wvar;
    Json explicit_doc;
};

GroupSpec parse_group_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("group '" + spec + "': expected kind:parameters");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    GroupSpec g;
    g.text = spec;
    if (kind == "file") {
        const Json doc = load_json_file(rest);
        if (doc.is_object() && doc.contains("type") && doc["type"] == "explicit") {
            g.explicit_doc = doc;
            return g;
        }
        try {
            g.wvar = measure_from_json(doc);
        } catch (const ParseError& e) {
            throw ParseError(rest + ": " + e.what());
        }
        return g;
    }
    const auto args = split(rest, ':');
    auto need = [&](std::size_t n, const char* form) {
        if (args.size() != n) throw UsageError("group '" + spec + "': expected " + form);
    };
    if (kind == "tailvar") {
        need(1, "tailvar:lambda");
        g.wvar = make_tailvar(usage_number(args[0], "group lambda"));
    } else if (kind == "alphavar") {
        need(2, "alphavar:alpha:m");
        g.wvar = make_alphavar_grid(usage_number(args[0], "group alpha"), usage_int(args[1], "group grid"));
    } else if (kind == "betavar") {
        need(3, "betavar:alpha:beta:m");
        g.wvar = make_betavar_grid(usage_number(args[0], "group alpha"), usage_number(args[1], "group beta"),
                                   usage_int(args[2], "group grid"));
    } else {
        throw UsageError("group '" + spec + "': unknown kind '" + kind + "' (tailvar, alphavar, betavar, file)");
    }
    return g;
}

ValuationGroup to_group(const GroupSpec& g, const SpacePtr& space) {
    if (g.wvar) return ValuationGroup::wvar(*g.wvar);
    const auto& doc = g.explicit_doc;
    if (!doc.contains("measures") || !doc["measures"].is_array())
        throw ParseError(g.text + ": explicit group needs an array \"measures\"");
    std::vector<Measure> measures;
    const auto& list = doc["measures"];
    for (std::size_t k = 0; k < list.size(); ++k) {
        const auto& m = list[k];
        const std::string where = g.text + ": measures[" + std::to_string(k) + "]";
        if (!m.is_array() || static_cast<Index>(m.size()) != space->size())
            throw ParseError(where + " must list one mass per scenario");
        Vector masses(space->size());
        for (Index j = 0; j < space->size(); ++j) {
            if (!m[static_cast<std::size_t>(j)].is_number()) throw ParseError(where + " must contain numbers");
            masses[j] = m[static_cast<std::size_t>(j)].get<double>();
        }
        measures.emplace_back(space, masses);
    }
    return ValuationGroup::explicit_measures(std::move(measures));
}

std::vector<ValuationGroup> build_groups(const std::vector<std::string>& specs, const SpacePtr& space) {
    std::vector<ValuationGroup> groups;
    for (const auto& s : specs) groups.push_back(to_group(parse_group_spec(s), space));
    return groups;
}

std::vector<WeightingMeasure> build_wvar(const std::vector<std::string>& specs) {
    std::vector<WeightingMeasure> out;
    for (const auto& s : specs) {
        auto g = parse_group_spec(s);
        if (!g.wvar) throw UsageError("group '" + s + "': a Weighted V@R measure is required here");
        out.push_back(*g.wvar);
    }
    return out;
}

PricingMode parse_mode(const std::string& mode) {
    if (mode == "conv") return PricingMode::conv;
    if (mode == "max") return PricingMode::max;
    throw UsageError("mode must be conv or max");
}

std::pair<double, double> parse_range(const std::string& text, const std::string& where) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError(where + ": expected lo:hi");
    auto bound = [&](const std::string& s) {
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return usage_number(s, where);
    };
    return {bound(parts[0]), bound(parts[1])};
}

struct MarketOptions {
    std::vector<std::string> assets;
    std::vector<std::string> long_only;
    std::vector<std::string> short_only;
    std::string box;
    std::vector<std::string> bounds;
};

void add_market_options(CLI::App* cmd, MarketOptions& m, bool with_box) {
    cmd->add_option("--asset", m.assets, "Tradable asset column (repeatable; default: all other columns)");
    cmd->add_option("--long-only", m.long_only, "Asset restricted to nonnegative positions");
    cmd->add_option("--short-only", m.short_only, "Asset restricted to nonpositive positions");
    if (with_box) {
        cmd->add_option("--box", m.box, "Position bounds lo:hi for every asset");
        cmd->add_option("--bound", m.bounds, "Position bounds NAME=lo:hi for one asset");
    }
}

MarketModel build_market(const ScenarioSet& set, const MarketOptions& opts,
                         const std::vector<std::string>& excluded) {
    std::vector<std::string> names = opts.assets;
    if (names.empty()) {
        for (const auto& [name, col] : set.columns) {
            if (std::find(excluded.begin(), excluded.end(), name) == excluded.end()) names.push_back(name);
        }
    }
    std::vector<RandomVariable> assets;
    std::vector<PositionBounds> bounds(names.size());
    for (const auto& n : names) assets.push_back(set.column(n));
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw UsageError("'" + name + "' is not a tradable asset");
        return static_cast<std::size_t>(it - names.begin());
    };
    if (!opts.box.empty()) {
        const auto [lo, hi] = parse_range(opts.box, "--box");
        for (auto& b : bounds) b = {lo, hi};
    }
    for (const auto& spec : opts.bounds) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw UsageError("--bound: expected NAME=lo:hi");
        const auto [lo, hi] = parse_range(spec.substr(eq + 1), "--bound");
        bounds[index_of(spec.substr(0, eq))] = {lo, hi};
    }
    for (const auto& n : opts.long_only) bounds[index_of(n)].lower = 0.0;
    for (const auto& n : opts.short_only) bounds[index_of(n)].upper = 0.0;
    return MarketModel(set.space, names, std::move(assets), std::move(bounds));
}

ScenarioSet load_set(const std::string& path) { return load_scenarios(path); }

// Sample CSV: a header of variable names, then one numeric row per sample.
std::vector<std::pair<std::string, std::vector<double>>> load_samples(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream is(text);
    std::string line;
    std::vector<std::pair<std::string, std::vector<double>>> cols;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cols.empty()) {
            for (const auto& c : cells) {
                if (c.empty()) throw ParseError(path + ": line 1: empty column name");
                for (const auto& [name, v] : cols) {
                    if (name == c) throw ParseError(path + ": line 1: duplicate column '" + c + "'");
                }
                cols.emplace_back(c, std::vector<double>{});
            }
            continue;
        }
        if (cells.size() != cols.size())
            throw ParseError(path + ": line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cols.size()) + " fields");
        for (std::size_t k = 0; k < cells.size(); ++k) {
            cols[k].second.push_back(parse_number(
                cells[k], path + ": line " + std::to_string(line_no) + ", column '" + cols[k].first + "'"));
        }
    }
    if (cols.empty()) throw ParseError(path + ": empty sample file");
    return cols;
}

const std::vector<double>& sample_column(const std::vector<std::pair<std::string, std::vector<double>>>& cols,
                                         const std::string& name) {
    for (const auto& [n, v] : cols) {
        if (n == name) return v;
    }
    throw ParseError("sample file has no column '" + name + "'");
}

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

void emit_error(std::ostream& err, const char* kind, const std::string& message, int code) {
    Json j;
    j["error"] = kind;
    j["code"] = code;
    j["message"] = message;
    err << j.dump() << '\n';
}

Json nsao_json(const NsaoReport& r, const std::vector<std::string>& names) {
    Json j;
    j["nsao"] = r.holds ? "holds" : "violated";
    if (!r.holds) {
        Json cert;
        cert["detail"] = r.detail;
        if (r.hedge.size() > 0) {
            cert["assets"] = names;
            cert["hedge"] = json_array(r.hedge);
            cert["risk"] = round12(r.hedge_risk);
        }
        j["certificate"] = cert;
    }
    return j;
}

}  // namespace

int thread_budget() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("COHERENT_DEAL_THREADS");
    if (!env || !*env) return static_cast<int>(hw);
    const double v = usage_number(env, "COHERENT_DEAL_THREADS");
    if (v < 1.0 || v != static_cast<double>(static_cast<long>(v)))
        throw UsageError("COHERENT_DEAL_THREADS must be a positive integer");
    return static_cast<int>(std::min<double>(v, hw));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coherent risk measures, good-deal price bounds and hedges on finite scenario spaces",
                 "coherent-deal"};
    app.require_subcommand(1);

    std::string scenarios;
    std::string claim;
    std::string column;
    std::vector<std::string> groups;
    std::string mode = "conv";
    MarketOptions market_opts;

    // risk
    auto* risk = app.add_subcommand("risk", "Weighted V@R of a column, of its factor projection, or a risk contribution");
    std::string factor;
    std::string portfolio;
    risk->add_option("--scenarios", scenarios, "Scenario file (.json or .csv)")->required();
    risk->add_option("--column", column, "Column to evaluate")->required();
    risk->add_option("--group", groups, "Measure spec (repeatable)")->required();
    risk->add_option("--factor", factor, "Project the column on this factor column first");
    risk->add_option("--portfolio", portfolio, "Risk contribution to this portfolio column");

    // price
    auto* price = app.add_subcommand("price", "Price interval of a claim");
    bool oracle = false;
    price->add_option("--scenarios", scenarios, "Scenario file")->required();
    price->add_option("--claim", claim, "Claim column")->required();
    price->add_option("--group", groups, "Valuation group spec (repeatable, ordered)")->required();
    price->add_option("--mode", mode, "conv or max")->check(CLI::IsMember({"conv", "max"}));
    price->add_flag("--oracle", oracle, "Cross-check against the subset-constraint dual");
    add_market_options(price, market_opts, false);

    // ftap
    auto* ftap = app.add_subcommand("ftap", "No strictly acceptable opportunities check");
    ftap->add_option("--scenarios", scenarios, "Scenario file")->required();
    ftap->add_option("--group", groups, "Valuation group spec (repeatable)")->required();
    ftap->add_option("--mode", mode, "conv or max")->check(CLI::IsMember({"conv", "max"}));
    add_market_options(ftap, market_opts, false);

    // superrep
    auto* superrep = app.add_subcommand("superrep", "Hedge and tranche split at the upper price");
    superrep->add_option("--scenarios", scenarios, "Scenario file")->required();
    superrep->add_option("--claim", claim, "Claim column")->required();
    superrep->add_option("--group", groups, "Weighted V@R group spec (repeatable, ordered)")->required();
    add_market_options(superrep, market_opts, false);

    // liquidity
    auto* liquidity = app.add_subcommand("liquidity", "Volume-dependent price bounds as CSV");
    std::string volumes;
    double vmin = 0.0;
    double vmax = 0.0;
    int steps = 0;
    liquidity->add_option("--scenarios", scenarios, "Scenario file")->required();
    liquidity->add_option("--claim", claim, "Claim column")->required();
    liquidity->add_option("--group", groups, "Weighted V@R group spec (repeatable)")->required();
    liquidity->add_option("--volumes", volumes, "Comma-separated trade volumes");
    liquidity->add_option("--vmin", vmin, "First volume of a uniform grid");
    liquidity->add_option("--vmax", vmax, "Last volume of a uniform grid");
    liquidity->add_option("--steps", steps, "Number of grid points");
    add_market_options(liquidity, market_opts, true);

    // delta
    auto* delta = app.add_subcommand("delta", "Interval of sensitivities of a call or bond option");
    std::string payoff;
    std::string xi;
    std::string schedule;
    double spot = 0.0;
    double strike = 0.0;
    double rate = 0.0;
    double expiry = 0.0;
    delta->add_option("--scenarios", scenarios, "Scenario file")->required();
    delta->add_option("--payoff", payoff, "call or bond")->required()->check(CLI::IsMember({"call", "bond"}));
    delta->add_option("--xi", xi, "Column of the random factor xi")->required();
    delta->add_option("--spot", spot, "Spot price (call)");
    delta->add_option("--strike", strike, "Strike")->required();
    delta->add_option("--rate", rate, "Interest rate (call) or short rate r0 (bond)")->required();
    delta->add_option("--expiry", expiry, "Expiry in years")->required();
    delta->add_option("--schedule", schedule, "Bond schedule JSON");
    delta->add_option("--group", groups, "Valuation group spec (repeatable)")->required();
    delta->add_option("--mode", mode, "conv or max")->check(CLI::IsMember({"conv", "max"}));
    add_market_options(delta, market_opts, false);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Empirical and bootstrap estimators on sample CSVs");
    std::string samples;
    std::string estimator;
    std::string by;
    std::vector<std::string> candidates;
    int alpha = 0;
    int beta = 1;
    long resamples = 0;
    std::uint64_t seed = 0;
    int bins = 0;
    estimate->add_option("--samples", samples, "Sample CSV, one column per variable")->required();
    estimate->add_option("--estimator", estimator, "wvar, alphavar, betavar, contribution, factor or upper")
        ->required()
        ->check(CLI::IsMember({"wvar", "alphavar", "betavar", "contribution", "factor", "upper"}));
    estimate->add_option("--column", column, "Sample column x");
    estimate->add_option("--by", by, "Ordering column w (contribution) or factor column y (factor)");
    estimate->add_option("--claim", claim, "Claim column (upper)");
    estimate->add_option("--candidate", candidates, "Hedge candidate column (upper, repeatable)");
    estimate->add_option("--group", groups, "Measure spec (repeatable for upper)");
    estimate->add_option("--alpha", alpha, "Number of draws per resample");
    estimate->add_option("--beta", beta, "Number of smallest draws averaged");
    estimate->add_option("--resamples", resamples, "Bootstrap resamples");
    estimate->add_option("--seed", seed, "RNG seed");
    estimate->add_option("--bins", bins, "Equal-frequency bins for the factor");

    // convolve
    auto* convolve = app.add_subcommand("convolve", "Convolution of Weighted V@Rs");
    bool majorant = false;
    convolve->add_option("--group", groups, "Weighted V@R spec (repeatable)")->required();
    convolve->add_flag("--majorant", majorant, "Least concave majorant of the maximum instead");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "usage", e.what(), usage_error);
        return usage_error;
    }

    try {
        if (risk->parsed()) {
            const auto set = load_set(scenarios);
            const auto measures = build_wvar(groups);
            const auto& x = set.column(column);
            Json j;
            j["column"] = column;
            if (!factor.empty() || !portfolio.empty()) {
                if (measures.size() != 1) throw UsageError("--factor and --portfolio take exactly one --group");
                if (!factor.empty() && !portfolio.empty()) {
                    const auto& y = set.column(factor);
                    const auto& w = set.column(portfolio);
                    j["factor"] = factor;
                    j["portfolio"] = portfolio;
                    j["contribution"] = round12(factor_risk_contribution(measures[0], x, y, w));
                } else if (!factor.empty()) {
                    j["factor"] = factor;
                    j["risk"] = round12(factor_risk(measures[0], x, set.column(factor)));
                } else {
                    const auto& w = set.column(portfolio);
                    const auto q = extreme_measure(measures[0], w);
                    j["portfolio"] = portfolio;
                    j["contribution"] = round12(-q.expectation(x));
                    j["unique"] = q.unique();
                    j["masses"] = json_array(q.masses());
                }
            } else {
                Json per = Json::array();
                for (const auto& mu : measures) per.push_back(round12(rho_wvar(mu, x)));
                j["risk"] = round12(rho_max(measures, x));
                j["groups"] = per;
            }
            emit(out, j);
            return ok;
        }

        if (price->parsed()) {
            const auto set = load_set(scenarios);
            const auto market = build_market(set, market_opts, {claim});
            const auto gs = build_groups(groups, set.space);
            const auto m = parse_mode(mode);
            const auto& f = set.column(claim);
            const auto interval = price_interval(market, gs, f, m);
            Json j = price_interval_to_json(interval);
            j["assets"] = market.names();
            j["mode"] = mode;
            if (oracle) {
                const auto up = dual_bruteforce(market, gs, f, Side::upper, m);
                const auto down = dual_bruteforce(market, gs, f, Side::lower, m);
                if (!up.feasible || !down.feasible)
                    throw NsaoViolation("subset-constraint dual is infeasible");
                Json o;
                o["interval"] = Json::array({round12(down.value), round12(up.value)});
                o["max_gap"] = round12(std::max(std::abs(up.value - interval.upper),
                                                std::abs(down.value - interval.lower)));
                j["oracle"] = o;
            }
            emit(out, j);
            return ok;
        }

        if (ftap->parsed()) {
            const auto set = load_set(scenarios);
            const auto market = build_market(set, market_opts, {});
            const auto gs = build_groups(groups, set.space);
            const auto report = nsao_check(market, gs, parse_mode(mode));
            emit(out, nsao_json(report, market.names()));
            if (!report.holds) {
                emit_error(err, "nsao", "NSAO violated: " + report.detail, nsao_violated);
                return nsao_violated;
            }
            return ok;
        }

        if (superrep->parsed()) {
            const auto set = load_set(scenarios);
            const auto market = build_market(set, market_opts, {claim});
            const auto gs = build_groups(groups, set.space);
            Json j = tranche_plan_to_json(superrep_split(market, gs, set.column(claim)));
            j["assets"] = market.names();
            emit(out, j);
            return ok;
        }

        if (liquidity->parsed()) {
            const auto set = load_set(scenarios);
            const auto market = build_market(set, market_opts, {claim});
            const auto gs = build_groups(groups, set.space);
            std::vector<double> grid;
            if (!volumes.empty()) {
                for (const auto& v : split(volumes, ',')) grid.push_back(usage_number(v, "--volumes"));
            } else if (steps >= 1) {
                if (steps == 1) {
                    grid.push_back(vmin);
                } else {
                    for (int k = 0; k < steps; ++k) grid.push_back(vmin + (vmax - vmin) * k / (steps - 1));
                }
            } else {
                throw UsageError("liquidity needs --volumes or --vmin/--vmax/--steps");
            }
            const auto curve = liquidity_curve(market, gs, set.column(claim), grid, thread_budget());
            out << liquidity_to_csv(curve);
            return ok;
        }

        if (delta->parsed()) {
            const auto set = load_set(scenarios);
            const auto market = build_market(set, market_opts, {xi});
            const auto gs = build_groups(groups, set.space);
            const auto& factor_col = set.column(xi);
            std::optional<RandomVariable> deriv;
            if (payoff == "call") {
                deriv = call_delta_payoff(spot, strike, rate, expiry, factor_col);
            } else {
                if (schedule.empty()) throw UsageError("--payoff bond needs --schedule");
                double expiry_shape = 0.0;
                const auto sched = bond_schedule_from_json(load_json_file(schedule), expiry_shape);
                deriv = bond_option_delta_payoff(rate, strike, expiry, sched, expiry_shape, factor_col);
            }
            Json j = price_interval_to_json(delta_interval(market, gs, *deriv, parse_mode(mode)));
            j["payoff"] = payoff;
            j["assets"] = market.names();
            j["derivative"] = json_array(deriv->values());
            emit(out, j);
            return ok;
        }

        if (estimate->parsed()) {
            const auto cols = load_samples(samples);
            Json j;
            j["estimator"] = estimator;
            auto need = [&](bool present, const char* what) {
                if (!present) throw UsageError(std::string("estimator ") + estimator + " needs " + what);
            };
            if (estimator == "alphavar" || estimator == "betavar") {
                need(!column.empty(), "--column");
                need(estimate->count("--seed") > 0, "--seed");
                need(resamples > 0, "--resamples");
                need(alpha > 0, "--alpha");
                const auto& x = sample_column(cols, column);
                const auto r = estimator == "alphavar"
                                   ? est_alpha_var(x, alpha, resamples, seed, thread_budget())
                                   : est_beta_var(x, alpha, beta, resamples, seed, thread_budget());
                j["estimate"] = round12(r.estimate);
                j["std_error"] = round12(r.std_error);
            } else if (estimator == "upper") {
                need(!claim.empty(), "--claim");
                const auto measures = build_wvar(groups);
                need(!measures.empty(), "--group");
                std::vector<std::vector<double>> hedges;
                for (const auto& c : candidates) hedges.push_back(sample_column(cols, c));
                j["estimate"] = round12(est_upper_price(sample_column(cols, claim), hedges, measures));
            } else {
                need(!column.empty(), "--column");
                const auto measures = build_wvar(groups);
                need(measures.size() == 1, "exactly one --group");
                const auto& x = sample_column(cols, column);
                if (estimator == "wvar") {
                    j["estimate"] = round12(est_wvar(x, measures[0]));
                } else {
                    need(!by.empty(), "--by");
                    const auto& y = sample_column(cols, by);
                    std::vector<std::pair<double, double>> pairs;
                    for (std::size_t t = 0; t < x.size(); ++t) pairs.emplace_back(x[t], y[t]);
                    if (estimator == "contribution") {
                        const auto r = est_risk_contribution(pairs, measures[0]);
                        j["estimate"] = round12(r.value);
                        j["unique"] = r.unique;
                    } else {
                        need(bins > 0, "--bins");
                        j["estimate"] = round12(est_factor_risk(pairs, measures[0], bins));
                    }
                }
            }
            emit(out, j);
            return ok;
        }

        if (convolve->parsed()) {
            const auto measures = build_wvar(groups);
            Json j;
            if (majorant) {
                std::vector<DistortionFunction> ds;
                for (const auto& mu : measures) ds.push_back(distortion(mu));
                const auto env = minimal_concave_majorant(ds);
                j["measure"] = measure_to_json(weighting_measure(env));
                j["distortion"] = distortion_to_json(env);
            } else {
                const auto mu = convolve_wvar(measures);
                j["measure"] = measure_to_json(mu);
                j["distortion"] = distortion_to_json(distortion(mu));
            }
            emit(out, j);
            return ok;
        }
    } catch (const UsageError& e) {
        emit_error(err, "usage", e.what(), usage_error);
        return usage_error;
    } catch (const NsaoViolation& e) {
        emit_error(err, "nsao", e.what(), nsao_violated);
        return nsao_violated;
    } catch (const ConditioningError& e) {
        emit_error(err, "conditioning", e.what(), conditioning_error);
        return conditioning_error;
    } catch (const std::exception& e) {
        emit_error(err, "data", e.what(), data_error);
        return data_error;
    }
    emit_error(err, "usage", "no command given", usage_error);
    return usage_error;
}

}  // namespace cdeal::cli
