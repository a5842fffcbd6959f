#pragma once

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellap/bell.hpp"
#include "bellap/blissard.hpp"
#include "bellap/expr.hpp"
#include "bellap/isomorphism.hpp"
#include "bellap/kernels.hpp"
#include "bellap/sequence.hpp"
#include "bellap/transform.hpp"

namespace bellap::cli {

using nlohmann::ordered_json;

inline std::string fmt(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto p = text.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, p - start));
        start = p + 1;
    }
}

// Exact fractions only; decimals feed the float world, not sequence algebra.
inline std::vector<Rational> parse_fraction_list(const std::string& text) {
    if (text.find('.') != std::string::npos)
        throw domain_error("decimals are rejected here; use exact fractions like 3/4");
    std::vector<Rational> out;
    for (const auto& tok : split(text, ',')) out.push_back(parse_rational(tok));
    return out;
}

// "1,2,5" or ranges "0.5:5:0.5" (inclusive of the endpoint up to rounding)
inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) {
        auto parts = split(tok, ':');
        try {
            if (parts.size() == 1) {
                out.push_back(std::stod(parts[0]));
            } else if (parts.size() == 3) {
                const double lo = std::stod(parts[0]);
                const double hi = std::stod(parts[1]);
                const double step = std::stod(parts[2]);
                if (step <= 0) throw domain_error("grid step must be positive");
                for (double v = lo; v <= hi + 1e-12 * std::abs(step); v += step)
                    out.push_back(v);
            } else {
                throw domain_error("grid entries are numbers or lo:hi:step ranges");
            }
        } catch (const std::invalid_argument&) {
            throw domain_error("not a number in grid: '" + tok + "'");
        }
    }
    if (out.empty()) throw domain_error("empty grid");
    return out;
}

inline UmbralSequence parse_sequence_spec(const std::string& spec) {
    if (spec == "ones") return UmbralSequence::ones();
    if (spec == "factorial") return UmbralSequence::factorial_rule();
    if (spec == "inv-succ" || spec == "shifted-harmonic") return UmbralSequence::inv_succ();
    if (spec.rfind("laguerre:", 0) == 0) {
        try {
            return UmbralSequence::laguerre_rule(std::stoi(spec.substr(9)));
        } catch (const std::invalid_argument&) {
            throw domain_error("laguerre rule needs an integer order, got '" + spec + "'");
        }
    }
    return UmbralSequence::explicit_terms(parse_fraction_list(spec), spec);
}

// ---------------------------------------------------------------------------

namespace detail {

inline int cmd_bell(int n, const std::string& g_text,
                    const std::optional<std::string>& f_text, const std::string& format,
                    std::ostream& out) {
    std::vector<Rational> g = parse_fraction_list(g_text);
    if (static_cast<int>(g.size()) < n)
        throw domain_error("need at least n entries in --g");
    PartialBellTable table(g, n);
    std::optional<std::vector<Rational>> f;
    if (f_text) {
        f = parse_fraction_list(*f_text);
        if (static_cast<int>(f->size()) < n)
            throw domain_error("need at least n entries in --f");
    }
    if (format == "json") {
        ordered_json doc;
        doc["n_max"] = n;
        doc["g"] = ordered_json::array();
        for (int i = 0; i < n; ++i) doc["g"].push_back(to_fraction_string(g[i]));
        doc["entries"] = ordered_json::array();
        for (int nn = 1; nn <= n; ++nn)
            for (int k = 1; k <= nn; ++k)
                doc["entries"].push_back({{"n", nn},
                                          {"k", k},
                                          {"value", to_fraction_string(table.at(nn, k))}});
        if (f) {
            doc["complete"] = ordered_json::array();
            for (int nn = 1; nn <= n; ++nn)
                doc["complete"].push_back(
                    {{"n", nn}, {"value", to_fraction_string(table.complete(nn, *f))}});
        }
        out << doc.dump(2) << '\n';
        return 0;
    }
    out << "n,k,value\n";
    for (int nn = 1; nn <= n; ++nn) {
        for (int k = 1; k <= nn; ++k)
            out << nn << ',' << k << ',' << to_fraction_string(table.at(nn, k)) << '\n';
        if (f) out << nn << ",0," << to_fraction_string(table.complete(nn, *f)) << '\n';
    }
    return 0;
}

inline int cmd_blissard(const std::string& seq_text, int order, const std::string& format,
                        std::ostream& out) {
    UmbralSequence a = parse_sequence_spec(seq_text);
    std::vector<Rational> b = blissard_reciprocal(a, order);
    std::vector<Rational> c = coeff_C(a, order);
    if (format == "json") {
        ordered_json doc;
        doc["sequence"] = a.label();
        doc["order"] = order;
        doc["b"] = ordered_json::array();
        doc["c"] = ordered_json::array();
        for (int k = 0; k <= order; ++k) {
            doc["b"].push_back(to_fraction_string(b[k]));
            doc["c"].push_back(to_fraction_string(c[k]));
        }
        out << doc.dump(2) << '\n';
        return 0;
    }
    out << "k,b,c\n";
    for (int k = 0; k <= order; ++k)
        out << k << ',' << to_fraction_string(b[k]) << ',' << to_fraction_string(c[k])
            << '\n';
    return 0;
}

struct KernelChoice {
    std::optional<int> laguerre_r;
    std::optional<std::string> sequence;
    std::vector<int> trunc_laguerre;  // r, n
    std::optional<int> trunc_geom;

    KernelSpec build(double eval_tol) const {
        int chosen = (laguerre_r ? 1 : 0) + (sequence ? 1 : 0) +
                     (trunc_laguerre.empty() ? 0 : 1) + (trunc_geom ? 1 : 0);
        if (chosen != 1)
            throw usage_error(
                "pick exactly one kernel: --laguerre, --sequence, --trunc-laguerre, "
                "--trunc-geom");
        KernelSpec spec = [&] {
            if (laguerre_r) return KernelSpec::laguerre(*laguerre_r);
            if (sequence) return KernelSpec::reciprocal_egf(parse_sequence_spec(*sequence));
            if (!trunc_laguerre.empty()) {
                if (trunc_laguerre.size() != 2)
                    throw usage_error("--trunc-laguerre takes r,n");
                return KernelSpec::truncated_laguerre(trunc_laguerre[0], trunc_laguerre[1]);
            }
            return KernelSpec::truncated_geometric(*trunc_geom);
        }();
        spec.eval_tol = eval_tol;
        return spec;
    }
};

inline ordered_json decay_to_json(double s, const DecayReport& rep) {
    ordered_json doc;
    doc["s"] = s;
    doc["verdict"] = to_string(rep.verdict);
    doc["fitted_rate"] = rep.fitted_rate;
    doc["fit_residual"] = rep.fit_residual;
    doc["grid"] = rep.grid;
    doc["kernel_values"] = rep.kernel_values;
    return doc;
}

inline int cmd_kernel(const KernelChoice& choice, double eval_tol, const std::string& s_text,
                      const std::optional<std::string>& t_text, bool probe, double t_max,
                      int points, const std::string& format, std::ostream& out) {
    KernelSpec spec = choice.build(eval_tol);
    std::vector<double> ss = parse_grid(s_text);
    if (probe) {
        ordered_json all = ordered_json::array();
        for (double s : ss) all.push_back(decay_to_json(s, hp_decay_probe(spec, s, t_max, points)));
        out << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
        return 0;
    }
    if (!t_text) throw usage_error("--t is required unless --probe is given");
    std::vector<double> ts = parse_grid(*t_text);
    if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (double s : ss)
            for (double t : ts)
                rows.push_back({{"s", s}, {"t", t}, {"value", kernel_eval(spec, s, t)}});
        out << rows.dump(2) << '\n';
        return 0;
    }
    out << "s,t,value\n";
    for (double s : ss)
        for (double t : ts)
            out << fmt(s, "%.6g") << ',' << fmt(t, "%.6g") << ','
                << fmt(kernel_eval(spec, s, t)) << '\n';
    return 0;
}

inline int cmd_transform(const std::string& f_text, const KernelChoice& choice,
                         std::optional<int> truncate, const std::string& s_text,
                         const QuadratureConfig& q, const std::string& format,
                         std::ostream& out) {
    FunctionExpr f = FunctionExpr::parse(f_text);
    std::vector<double> ss = parse_grid(s_text);
    std::optional<KernelSpec> spec;
    if (truncate) {
        if (!choice.laguerre_r)
            throw usage_error("--truncate applies to --laguerre kernels");
    } else {
        spec = choice.build(1e-15);
    }
    ordered_json rows = ordered_json::array();
    if (format != "json") out << "s,value,error_estimate,cutoff_T,flags\n";
    for (double s : ss) {
        TransformResult res = truncate
                                  ? transform_truncated(f, *choice.laguerre_r, *truncate, s, q)
                                  : transform(f, *spec, s, q);
        if (format == "json") {
            ordered_json flags = ordered_json::array();
            for (const auto& name : split(res.flags.joined(), ';'))
                if (!name.empty()) flags.push_back(name);
            rows.push_back({{"s", s},
                            {"value", res.value},
                            {"error_estimate", res.error_estimate},
                            {"cutoff_t", res.cutoff_T},
                            {"flags", flags},
                            {"decay_verdict", to_string(res.decay.verdict)}});
        } else {
            out << fmt(s, "%.6g") << ',' << fmt(res.value, "%.10g") << ','
                << fmt(res.error_estimate, "%.2e") << ',' << fmt(res.cutoff_T, "%.6g")
                << ',' << res.flags.joined() << '\n';
        }
    }
    if (format == "json") out << rows.dump(2) << '\n';
    return 0;
}

inline int cmd_invert(const std::string& F_text, int r, double gamma,
                      const std::string& t_text, const QuadratureConfig& q,
                      const std::string& format, std::ostream& out) {
    FunctionExpr F = FunctionExpr::parse(F_text, 's');
    auto F_eval = [&](std::complex<double> z) { return F.eval_complex(z); };
    std::vector<double> ts = parse_grid(t_text);
    ordered_json rows = ordered_json::array();
    if (format != "json")
        out << "t,value,error_estimate,segments,contour_height,converged,"
               "contour_divergence\n";
    for (double t : ts) {
        InversionResult res = bromwich_invert(F_eval, r, t, gamma, q);
        if (format == "json") {
            rows.push_back({{"t", t},
                            {"value", res.value},
                            {"error_estimate", res.error_estimate},
                            {"segments", res.segments},
                            {"contour_height", res.contour_height},
                            {"converged", res.converged},
                            {"contour_divergence", res.contour_divergence}});
        } else {
            out << fmt(t, "%.6g") << ',' << fmt(res.value, "%.10g") << ','
                << fmt(res.error_estimate, "%.2e") << ',' << res.segments << ','
                << fmt(res.contour_height, "%.6g") << ','
                << (res.converged ? "true" : "false") << ','
                << (res.contour_divergence ? "true" : "false") << '\n';
        }
    }
    if (format == "json") out << rows.dump(2) << '\n';
    return 0;
}

inline FormalPowerSeries named_series(const std::string& text, int order) {
    if (text == "exp") return FormalPowerSeries::exp_series(order);
    if (text.rfind("e:", 0) == 0) {
        int r;
        try {
            r = std::stoi(text.substr(2));
        } catch (const std::invalid_argument&) {
            throw domain_error("series e:R needs an integer R");
        }
        if (r < 0) throw domain_error("series e:R needs R >= 0");
        std::vector<Rational> c(order + 1);
        for (int k = 0; k <= order; ++k) c[k] = Rational(1, pow_int(factorial(k), r + 1));
        return FormalPowerSeries(std::move(c));
    }
    if (text.rfind("coeffs:", 0) == 0) {
        std::vector<Rational> c = parse_fraction_list(text.substr(7));
        c.resize(order + 1, Rational(0));
        return FormalPowerSeries(std::move(c));
    }
    throw domain_error("unknown series '" + text + "'; use exp, e:R, or coeffs:...");
}

inline int cmd_iso(std::optional<int> m, const std::optional<std::string>& seq_text,
                   const std::string& series_text, int order, bool reciprocal, bool gap,
                   const std::string& format, std::ostream& out) {
    if (gap) {
        if (!m) throw usage_error("--gap needs --m");
        ConventionGap g = convention_gap(*m, order);
        if (format == "json") {
            ordered_json doc;
            doc["m"] = *m;
            doc["first_disagreement_order"] = g.order;
            doc["literal"] = to_fraction_string(g.literal_value);
            doc["reciprocal"] = to_fraction_string(g.reciprocal_value);
            out << doc.dump(2) << '\n';
        } else {
            out << "order,literal,reciprocal\n";
            out << g.order << ',' << to_fraction_string(g.literal_value) << ','
                << to_fraction_string(g.reciprocal_value) << '\n';
        }
        return 0;
    }
    if (static_cast<bool>(m) == static_cast<bool>(seq_text))
        throw usage_error("pick exactly one map: --m M or --sequence SPEC");
    FormalPowerSeries p = named_series(series_text, order);
    FormalPowerSeries image = [&] {
        if (seq_text) return apply_iso_general(p, parse_sequence_spec(*seq_text));
        if (reciprocal) return iso_reciprocal_convention(p, *m, order);
        return apply_iso(p, *m);
    }();
    if (format == "json") {
        ordered_json doc;
        doc["map"] = seq_text ? "general(" + *seq_text + ")"
                              : (reciprocal ? "reciprocal-iterate(" : "iterate(") +
                                    std::to_string(*m) + ")";
        doc["series"] = series_text;
        doc["coefficients"] = ordered_json::array();
        for (int k = 0; k <= image.order(); ++k)
            doc["coefficients"].push_back(to_fraction_string(image[k]));
        out << doc.dump(2) << '\n';
        return 0;
    }
    out << "k,coefficient\n";
    for (int k = 0; k <= image.order(); ++k)
        out << k << ',' << to_fraction_string(image[k]) << '\n';
    return 0;
}

inline int cmd_selftest(std::ostream& out) {
    int passed = 0, failed = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "ok " : "FAIL ") << name << '\n';
        (ok ? passed : failed) += 1;
    };

    {
        std::vector<Rational> g = {Rational(1),      Rational(1, 2), Rational(-2, 3),
                                   Rational(3),      Rational(1, 5), Rational(-1),
                                   Rational(2, 7)};
        bool ok = true;
        for (int n = 1; n <= 7 && ok; ++n)
            for (int k = 1; k <= n && ok; ++k)
                ok = partial_bell(n, k, g) == bell_partition_oracle(n, k, g);
        check("bell-recursion-vs-partition-oracle", ok);

        bool rows = true;
        PartialBellTable table(g, 7);
        for (int n = 1; n <= 7 && rows; ++n)
            rows = table.at(n, 1) == g[n - 1] && table.at(n, n) == pow_rat(g[0], n);
        check("bell-boundary-rows", rows);
    }
    {
        bool ok = stirling2(4, 2) == 7 && stirling2(5, 3) == 25 && stirling2(0, 0) == 1;
        std::vector<Rational> ones(7, Rational(1));
        for (int n = 1; n <= 7 && ok; ++n)
            for (int k = 1; k <= n && ok; ++k)
                ok = Rational(stirling2(n, k)) == partial_bell(n, k, ones);
        check("stirling-triangle", ok);

        bool ident = true;
        for (int k = 1; k <= 15 && ident; ++k) {
            Integer acc = 0;
            for (int h = 1; h <= k; ++h) {
                Integer term = factorial(h) * stirling2(k, h);
                acc += ((k - h) % 2) ? -term : term;
            }
            ident = acc == 1;
        }
        check("stirling-alternating-identity", ident);
    }
    {
        auto agree = [&](const UmbralSequence& a, int N) {
            return blissard_reciprocal(a, N) == egf_reciprocal_oracle(a, N);
        };
        UmbralSequence expl = UmbralSequence::explicit_terms(
            {Rational(1), Rational(2), Rational(-1, 3), Rational(0), Rational(5, 4)});
        check("blissard-vs-division",
              agree(UmbralSequence::laguerre_rule(1), 12) &&
                  agree(UmbralSequence::inv_succ(), 12) && agree(expl, 12));

        auto b = blissard_reciprocal(UmbralSequence::ones(), 20);
        bool alt = true;
        for (int n = 0; n <= 20; ++n) alt = alt && b[n] == (n % 2 ? -1 : 1);
        check("blissard-ones-alternating", alt);

        auto bern = blissard_reciprocal(UmbralSequence::inv_succ(), 8);
        const Rational expect[9] = {Rational(1),      Rational(-1, 2), Rational(1, 6),
                                    Rational(0),      Rational(-1, 30), Rational(0),
                                    Rational(1, 42),  Rational(0),      Rational(-1, 30)};
        bool bok = true;
        for (int n = 0; n <= 8; ++n) bok = bok && bern[n] == expect[n];
        check("bernoulli-from-inv-succ", bok);

        check("c-coefficients-match-blissard",
              coeff_C(expl, 12) == blissard_reciprocal(expl, 12));
        auto C = coeff_C(UmbralSequence::ones(), 15);
        bool cok = true;
        for (int k = 0; k <= 15; ++k) cok = cok && C[k] == (k % 2 ? -1 : 1);
        check("c-ones-alternating", cok);

        std::vector<Rational> prod(13, Rational(0));
        auto av = expl.prefix(12);
        auto bv = blissard_reciprocal(expl, 12);
        bool round = true;
        for (int n = 1; n <= 12 && round; ++n) {
            Rational acc = 0;
            for (int k = 0; k <= n; ++k)
                acc += Rational(binomial(n, k)) * av[k] * bv[n - k];
            round = acc == 0;
        }
        check("egf-roundtrip", round);

        auto bb = blissard_reciprocal(
            UmbralSequence::explicit_terms(blissard_reciprocal(expl, 10)), 10);
        bool invol = true;
        for (int n = 0; n <= 10; ++n) invol = invol && bb[n] == av[n];
        check("blissard-involution", invol);
    }
    {
        bool ok = true;
        for (int m = 1; m <= 3 && ok; ++m) {
            FormalPowerSeries em = apply_iso(FormalPowerSeries::exp_series(20), m);
            for (int k = 0; k <= 20 && ok; ++k)
                ok = em[k] == Rational(1, pow_int(factorial(k), m + 1));
        }
        check("iso-exp-to-laguerre", ok);

        bool conv = true;
        for (int m = 1; m <= 2 && conv; ++m) {
            FormalPowerSeries recip =
                iso_reciprocal_convention(FormalPowerSeries::exp_series(15), m, 15);
            auto b = blissard_reciprocal(UmbralSequence::laguerre_rule(m), 15);
            for (int k = 0; k <= 15 && conv; ++k)
                conv = recip[k] == b[k] / factorial(k);
        }
        check("iso-reciprocal-convention", conv);

        ConventionGap gap = convention_gap(1, 10);
        check("iso-convention-gap", gap.order == 2 && gap.literal_value == Rational(1, 4) &&
                                        gap.reciprocal_value == Rational(3, 4));
    }
    {
        UmbralSequence a = UmbralSequence::inv_succ();
        UmbralSequence ax = a.scaled(Rational(3, 2));
        bool ok = true;
        for (int k = 0; k <= 25 && ok; ++k)
            ok = ax.term(k) == pow_rat(Rational(3, 2), k) * a.term(k);
        check("homothety-coefficient-level", ok);
    }

    out << "selftest: " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace detail

inline int run_command(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell polynomials, Blissard reciprocals, and sequence-parameterized "
                 "Laplace-type transforms"};
    app.name("bellap");
    app.require_subcommand(0, 1);

    // bell
    auto* bell = app.add_subcommand("bell", "partial Bell polynomial table");
    int bell_n = 1;
    std::string bell_g, bell_format = "csv";
    std::string bell_f_raw;
    bell->add_option("--n", bell_n, "table order")->required()->check(CLI::PositiveNumber);
    bell->add_option("--g", bell_g, "inputs g_1,g_2,... as exact fractions")->required();
    auto* bell_f_opt = bell->add_option("--f", bell_f_raw,
                                        "weights f_1..f_n; adds complete-value rows (k=0)");
    bell->add_option("--output", bell_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // blissard
    auto* blis = app.add_subcommand("blissard", "reciprocal sequence and kernel coefficients");
    std::string blis_seq, blis_format = "csv";
    int blis_order = 0;
    blis->add_option("--sequence", blis_seq, "ones|laguerre:R|factorial|inv-succ|a_0,a_1,...")
        ->required();
    blis->add_option("--order", blis_order, "largest index")->required()
        ->check(CLI::NonNegativeNumber);
    blis->add_option("--output", blis_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // kernel
    auto* kern = app.add_subcommand("kernel", "evaluate kernels and probe their decay");
    detail::KernelChoice kern_choice;
    int kern_lag = 0, kern_geom = 0, kern_points = 33;
    std::string kern_seq, kern_s, kern_t, kern_format = "csv";
    double kern_tol = 1e-15, kern_tmax = 100.0;
    bool kern_probe = false;
    auto* kern_lag_opt = kern->add_option("--laguerre", kern_lag, "kernel 1/e_r(st)")
                             ->check(CLI::NonNegativeNumber);
    kern->add_option("--sequence", kern_seq, "reciprocal-EGF kernel for this sequence");
    kern->add_option("--trunc-laguerre", kern_choice.trunc_laguerre,
                     "truncated Laguerre kernel r,n")
        ->delimiter(',');
    auto* kern_geom_opt =
        kern->add_option("--trunc-geom", kern_geom, "truncated geometric kernel of degree n");
    kern->add_option("--s", kern_s, "s grid (list or lo:hi:step)")->required();
    kern->add_option("--t", kern_t, "t grid");
    kern->add_option("--tol", kern_tol, "series stopping tolerance");
    kern->add_flag("--probe", kern_probe, "emit a decay report instead of values");
    kern->add_option("--t-max", kern_tmax, "probe grid upper end");
    kern->add_option("--points", kern_points, "probe grid size");
    kern->add_option("--output", kern_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // transform
    auto* trans = app.add_subcommand("transform", "evaluate the transform on an s grid");
    detail::KernelChoice trans_choice;
    int trans_lag = 0, trans_trunc = 0;
    std::string trans_f, trans_seq, trans_s, trans_format = "csv";
    QuadratureConfig trans_q;
    trans->add_option("--function", trans_f, "f(t), e.g. \"exp(-t)\"")->required();
    auto* trans_lag_opt = trans->add_option("--laguerre", trans_lag, "kernel 1/e_r(st)")
                              ->check(CLI::NonNegativeNumber);
    auto* trans_trunc_opt =
        trans->add_option("--truncate", trans_trunc, "use the degree-n truncated denominator")
            ->check(CLI::PositiveNumber);
    trans->add_option("--sequence", trans_seq, "reciprocal-EGF kernel sequence");
    trans->add_option("--s", trans_s, "s grid")->required();
    trans->add_option("--abs-tol", trans_q.abs_tol, "absolute quadrature tolerance")
        ->envname("BELLAP_TOL");
    trans->add_option("--rel-tol", trans_q.rel_tol, "relative quadrature tolerance")
        ->envname("BELLAP_TOL");
    trans->add_option("--tail-eps", trans_q.tail_epsilon, "tail cutoff threshold");
    trans->add_option("--output", trans_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // invert
    auto* inv = app.add_subcommand("invert", "experimental contour inversion");
    std::string inv_F, inv_t, inv_format = "csv";
    int inv_r = 0;
    double inv_gamma = 0.0;
    QuadratureConfig inv_q;
    inv->add_option("--transform", inv_F, "F(s), e.g. \"1/(s+1)\"")->required();
    inv->add_option("--r", inv_r, "kernel order on the contour")
        ->check(CLI::NonNegativeNumber);
    inv->add_option("--gamma", inv_gamma, "contour abscissa");
    inv->add_option("--t", inv_t, "t grid")->required();
    inv->add_option("--abs-tol", inv_q.abs_tol, "stop tolerance")->envname("BELLAP_TOL");
    inv->add_option("--output", inv_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // iso
    auto* iso = app.add_subcommand("iso", "coefficient-space maps on formal series");
    int iso_m = 1, iso_order = 20;
    bool iso_recip = false, iso_gap = false;
    std::string iso_seq, iso_series = "exp", iso_format = "csv";
    auto* iso_m_opt = iso->add_option("--m", iso_m, "iterate count of the factorial map")
                          ->check(CLI::PositiveNumber);
    iso->add_option("--sequence", iso_seq, "general coefficient map a_n * s^n");
    iso->add_option("--series", iso_series, "exp | e:R | coeffs:c0,c1,...");
    iso->add_option("--order", iso_order, "truncation order")->check(CLI::NonNegativeNumber);
    iso->add_flag("--reciprocal", iso_recip,
                  "apply the multiplicative convention to a denominator series");
    iso->add_flag("--gap", iso_gap, "report where the two conventions first disagree");
    iso->add_option("--output", iso_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // selftest
    auto* self = app.add_subcommand("selftest", "run the exact-arithmetic identity suite");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));

        if (*bell)
            return detail::cmd_bell(bell_n, bell_g,
                                    *bell_f_opt ? std::optional(bell_f_raw) : std::nullopt,
                                    bell_format, out);
        if (*blis) return detail::cmd_blissard(blis_seq, blis_order, blis_format, out);
        if (*kern) {
            if (*kern_lag_opt) kern_choice.laguerre_r = kern_lag;
            if (!kern_seq.empty()) kern_choice.sequence = kern_seq;
            if (*kern_geom_opt) kern_choice.trunc_geom = kern_geom;
            return detail::cmd_kernel(kern_choice, kern_tol, kern_s,
                                      kern_t.empty() ? std::nullopt : std::optional(kern_t),
                                      kern_probe, kern_tmax, kern_points, kern_format, out);
        }
        if (*trans) {
            if (*trans_lag_opt) trans_choice.laguerre_r = trans_lag;
            if (!trans_seq.empty()) trans_choice.sequence = trans_seq;
            return detail::cmd_transform(
                trans_f, trans_choice,
                *trans_trunc_opt ? std::optional(trans_trunc) : std::nullopt, trans_s,
                trans_q, trans_format, out);
        }
        if (*inv)
            return detail::cmd_invert(inv_F, inv_r, inv_gamma, inv_t, inv_q, inv_format, out);
        if (*iso)
            return detail::cmd_iso(*iso_m_opt ? std::optional(iso_m) : std::nullopt,
                                   iso_seq.empty() ? std::nullopt : std::optional(iso_seq),
                                   iso_series, iso_order, iso_recip, iso_gap, iso_format,
                                   out);
        if (*self) return detail::cmd_selftest(out);

        err << app.help();
        return 2;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nrun 'bellap --help' for usage\n";
        return 2;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\nrun 'bellap --help' for usage\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace bellap::cli
