#include "qengine/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qengine/bounds.hpp"
#include "qengine/fcs.hpp"
#include "qengine/sampling.hpp"
#include "qengine/steady.hpp"

namespace qengine {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double upsilon_of(const EngineParams& p, const DensityMatrix& rho)
{
    double u = 0;
    for (const auto& j : jump_operators(p))
        u += (j.matrix.adjoint() * j.matrix * rho.m).trace().real();
    return u;
}

} // namespace

Row evaluate_row(const EngineParams& p, Method m)
{
    check_params(p);
    Row r;
    r.p = p;
    for (double* f : {&r.coherence, &r.power, &r.j_hot, &r.j_cold, &r.efficiency, &r.entropy_rate,
                      &r.var_power, &r.nsr, &r.F_p, &r.fano, &r.q_ctur, &r.upsilon, &r.psi, &r.f_qtur,
                      &r.slack})
        *f = kNaN;
    const Occupations occ = occupations(p);
    r.n_h = occ.n_h;
    r.n_c = occ.n_c;
    r.valid = engine_valid(p);
    if (!r.valid)
        return r;

    const double dw = p.omega_h - p.omega_c;
    bool infinite = false;
    try {
        if (m == Method::Numeric) {
            const Observables o = observables(p);
            r.coherence = o.coherence;
            r.power = o.power;
            r.j_hot = o.j_hot;
            r.j_cold = o.j_cold;
            r.efficiency = o.efficiency;
            r.entropy_rate = o.entropy_rate;
            infinite = o.infinite_entropy;
            const QturBound b = qtur_bound(p);
            r.upsilon = b.upsilon;
            r.psi = b.psi;
            r.f_qtur = b.f;
        } else {
            r.coherence = coherence_closed(p);
            r.power = -p.alpha * dw * r.coherence;
            r.j_hot = p.alpha * p.omega_h * r.coherence;
            r.j_cold = -p.alpha * p.omega_c * r.coherence;
            r.efficiency = 1.0 - p.omega_c / p.omega_h;
            const double lg = bias_log(occ.n_h, occ.n_c);
            const double flux = std::abs(r.power) / dw;
            infinite = std::isinf(lg);
            r.entropy_rate = infinite ? (flux > 0 ? lg : 0.0) : lg * flux;
            r.f_qtur = qtur_bound_closed(p);
            r.upsilon = upsilon_of(p, steady_closed(p));
            r.psi = 1.0 / r.f_qtur - r.upsilon;
        }
        r.F_p = population_fano(occ.n_h, occ.n_c);
        r.fano = fano(p).f_total;
    } catch (const Error&) {
        return r;
    }
    try {
        const CumulantReport c = m == Method::Numeric ? cumulants(p, CountedObservable::Power)
                                                      : cumulants_closed(p, CountedObservable::Power);
        r.var_power = c.variance;
        r.nsr = c.nsr;
        r.q_ctur = infinite ? std::numeric_limits<double>::infinity() : r.entropy_rate * c.nsr;
        r.slack = c.nsr - r.f_qtur;
    } catch (const Error&) {
    }
    return r;
}

std::string format_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

std::string csv_header()
{
    return "kind,gamma0,omega_h,omega_c,beta_h,beta_c,alpha,n_h,n_c,valid,coherence,power,j_hot,j_cold,"
           "efficiency,entropy_rate,var_power,nsr,F_p,fano,q_ctur,upsilon,psi,f_qtur,slack";
}

std::string csv_line(const Row& r)
{
    std::string s = to_string(r.p.kind);
    auto add = [&](double v) {
        s += ',';
        s += format_double(v);
    };
    for (double v : {r.p.gamma0, r.p.omega_h, r.p.omega_c, r.p.beta_h, r.p.beta_c, r.p.alpha, r.n_h, r.n_c})
        add(v);
    s += r.valid ? ",1" : ",0";
    for (double v : {r.coherence, r.power, r.j_hot, r.j_cold, r.efficiency, r.entropy_rate, r.var_power, r.nsr,
                     r.F_p, r.fano, r.q_ctur, r.upsilon, r.psi, r.f_qtur, r.slack})
        add(v);
    return s;
}

// ---------------------------------------------------------------- point JSON

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double x)
{
    return std::isfinite(x) ? ojson(x) : ojson(nullptr);
}

} // namespace

std::string point_json(const EngineParams& p)
{
    require_engine(p);
    ojson j;
    j["schema"] = "qengine-point 1";
    j["kind"] = to_string(p.kind);
    j["params"] = {{"gamma0", p.gamma0}, {"omega_h", p.omega_h}, {"omega_c", p.omega_c},
                   {"beta_h", p.beta_h}, {"beta_c", p.beta_c},   {"alpha", p.alpha}};

    const Occupations occ = occupations(p);
    j["occupations"] = {{"n_h", occ.n_h},
                        {"n_c", occ.n_c},
                        {"degenerate_h", occ.degenerate_h},
                        {"degenerate_c", occ.degenerate_c}};
    const Rates r = rates(p);
    if (p.kind == EngineKind::Coherent)
        j["rates"] = {{"gamma1", r.gamma1}, {"gamma2", r.gamma2}};
    else
        j["rates"] = {{"g1", r.g1}, {"g2", r.g2}, {"g3", r.g3}, {"g4", r.g4}};

    const DensityMatrix rho = steady_numeric(liouvillian(p));
    ojson re = ojson::array(), im = ojson::array();
    for (std::size_t a = 0; a < rho.dim(); ++a) {
        ojson rr = ojson::array(), ii = ojson::array();
        for (std::size_t b = 0; b < rho.dim(); ++b) {
            rr.push_back(rho.m(a, b).real());
            ii.push_back(rho.m(a, b).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    j["steady_state"] = {{"real", re}, {"imag", im}};

    const Observables o = observables(p);
    j["observables"] = {{"power", o.power},
                        {"j_hot", o.j_hot},
                        {"j_cold", o.j_cold},
                        {"efficiency", o.efficiency},
                        {"photon_flux", o.photon_flux},
                        {"entropy_rate", num(o.entropy_rate)},
                        {"infinite_entropy", o.infinite_entropy},
                        {"coherence", o.coherence}};

    ojson cum;
    for (auto obs : {CountedObservable::Power, CountedObservable::HotCurrent, CountedObservable::ColdCurrent,
                     CountedObservable::PhotonFlux}) {
        try {
            const CumulantReport c = cumulants(p, obs);
            cum[to_string(obs)] = {{"mean", c.mean}, {"variance", c.variance}, {"nsr", c.nsr}, {"status", "ok"}};
        } catch (const ZeroMean&) {
            cum[to_string(obs)] = {{"mean", 0.0}, {"variance", nullptr}, {"nsr", nullptr}, {"status", "ZeroMean"}};
        }
    }
    j["cumulants"] = cum;

    const FanoReport f = fano(p);
    j["fano"] = {{"f_total", f.f_total}, {"f_pop", f.f_pop}, {"coherent_correction", f.coherent_correction}};

    const QturBound b = qtur_bound(p);
    ojson t;
    try {
        const TURReport tr = tur_report(p);
        t = {{"q_value", num(tr.q_value)},   {"nsr", tr.nsr},
             {"entropy_rate", num(tr.entropy_rate)}, {"upsilon", tr.upsilon},
             {"psi", tr.psi},                {"f_bound", tr.f_bound},
             {"slack", tr.slack},            {"ctur_violated", tr.ctur_violated},
             {"qtur_ok", tr.qtur_ok},        {"infinite_entropy", tr.infinite_entropy},
             {"status", "ok"}};
    } catch (const ZeroMean&) {
        t = {{"q_value", nullptr},       {"nsr", nullptr},         {"entropy_rate", num(o.entropy_rate)},
             {"upsilon", b.upsilon},     {"psi", b.psi},           {"f_bound", b.f},
             {"slack", nullptr},         {"ctur_violated", false}, {"qtur_ok", nullptr},
             {"infinite_entropy", o.infinite_entropy}, {"status", "ZeroMean"}};
    }
    j["tur"] = t;
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------------- sweeps

std::vector<double> Axis::values() const
{
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : double(i) / (count - 1);
        v[i] = log ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                   : start + t * (stop - start);
    }
    if (count > 1) {
        v.front() = start;
        v.back() = stop;
    }
    return v;
}

Axis parse_axis(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 4 && parts.size() != 5)
        throw InvalidArgument("axis must be name:start:stop:count[:log|:lin]");
    Axis a;
    a.name = parts[0];
    if (a.name != "alpha" && a.name != "beta_c" && a.name != "beta_h")
        throw InvalidArgument("axis name must be alpha, beta_c or beta_h");
    try {
        std::size_t used = 0;
        a.start = std::stod(parts[1], &used);
        if (used != parts[1].size())
            throw InvalidArgument("bad axis start");
        a.stop = std::stod(parts[2], &used);
        if (used != parts[2].size())
            throw InvalidArgument("bad axis stop");
        a.count = std::stoi(parts[3], &used);
        if (used != parts[3].size())
            throw InvalidArgument("bad axis count");
    } catch (const std::logic_error&) {
        throw InvalidArgument("axis values must be numbers");
    }
    if (parts.size() == 5) {
        if (parts[4] == "log")
            a.log = true;
        else if (parts[4] != "lin")
            throw InvalidArgument("axis spacing must be log or lin");
    }
    return a;
}

namespace {

void set_axis(EngineParams& p, const std::string& name, double v)
{
    if (name == "alpha")
        p.alpha = v;
    else if (name == "beta_c")
        p.beta_c = v;
    else
        p.beta_h = v;
}

} // namespace

void check_sweep(const SweepSpec& s)
{
    if (s.axes.empty() || s.axes.size() > 2)
        throw InvalidArgument("sweep needs one or two axes");
    if (s.axes.size() == 2 && s.axes[0].name == s.axes[1].name)
        throw InvalidArgument("sweep axes must differ");
    if (s.kinds.empty())
        throw InvalidArgument("sweep needs at least one kind");
    for (const auto& a : s.axes) {
        if (a.count < 2)
            throw InvalidArgument("axis count must be >= 2");
        if (!(a.start > 0) || !(a.stop > 0))
            throw InvalidArgument("axis ranges must be positive");
    }
    // every grid point must be parameter-valid
    for (const auto& a : s.axes)
        for (double v : {a.start, a.stop}) {
            EngineParams p = s.fixed;
            set_axis(p, a.name, v);
            if (s.axes.size() == 2) {
                const auto& b = s.axes[&a == &s.axes[0] ? 1 : 0];
                for (double w : {b.start, b.stop}) {
                    EngineParams q = p;
                    set_axis(q, b.name, w);
                    check_params(q);
                }
            } else {
                check_params(p);
            }
        }
}

void run_sweep(const SweepSpec& s, std::ostream& csv, const std::vector<std::string>& metadata)
{
    check_sweep(s);
    csv << "# schema " << kCsvSchema << "\n";
    for (const auto& m : metadata)
        csv << "# " << m << "\n";
    csv << csv_header() << "\n";
    const std::vector<double> first = s.axes[0].values();
    const std::vector<double> second = s.axes.size() == 2 ? s.axes[1].values() : std::vector<double>{0.0};
    for (EngineKind k : s.kinds)
        for (double u : first)
            for (double v : second) {
                EngineParams p = s.fixed;
                p.kind = k;
                set_axis(p, s.axes[0].name, u);
                if (s.axes.size() == 2)
                    set_axis(p, s.axes[1].name, v);
                csv << csv_line(evaluate_row(p, s.method)) << "\n";
            }
}

// -------------------------------------------------------------------- figures

namespace {

struct PresetInfo {
    FigurePreset id;
    const char* name;
    double beta_h;
    double beta_c; // ignored for 2-D presets and AlphaCrit
};

const PresetInfo kPresets[] = {
    {FigurePreset::Fig2a, "fig2a", 0.01, 0.8},  {FigurePreset::Fig2b, "fig2b", 0.001, 0.0},
    {FigurePreset::Fig3a, "fig3a", 0.001, 0.0}, {FigurePreset::Fig3b, "fig3b", 0.01, 0.8},
    {FigurePreset::Fig3c, "fig3c", 0.01, 3.0},  {FigurePreset::Fig4a, "fig4a", 0.01, 0.1},
    {FigurePreset::Fig4b, "fig4b", 0.003, 0.7}, {FigurePreset::AlphaCrit, "alpha-crit", 0.001, 0.0},
};

const PresetInfo& info(FigurePreset f)
{
    for (const auto& p : kPresets)
        if (p.id == f)
            return p;
    return kPresets[0];
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

EngineParams preset_base(const PresetInfo& pi)
{
    EngineParams p;
    p.gamma0 = 0.01;
    p.omega_h = 10;
    p.omega_c = 5;
    p.beta_h = pi.beta_h;
    p.beta_c = pi.beta_c;
    return p;
}

const Axis kAlphaAxis{"alpha", 1e-3, 1.0, 400, true};

std::string line(const std::string& key, std::initializer_list<double> vals)
{
    std::string s = key;
    for (double v : vals)
        s += " " + fmt(v);
    return s;
}

} // namespace

std::optional<FigurePreset> parse_preset(const std::string& name)
{
    std::string n;
    for (char c : name)
        n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (n == "alphacrit" || n == "alpha_crit")
        n = "alpha-crit";
    for (const auto& p : kPresets)
        if (n == p.name)
            return p.id;
    return std::nullopt;
}

std::string preset_name(FigurePreset f)
{
    return info(f).name;
}

FigureOutput run_figure(FigurePreset f, std::ostream& csv, std::ostream* ratio_csv)
{
    const PresetInfo& pi = info(f);
    const EngineParams base = preset_base(pi);
    FigureOutput out;
    std::vector<std::string> meta = {
        std::string("preset ") + pi.name,
        line("gamma0 omega_h omega_c", {base.gamma0, base.omega_h, base.omega_c}),
        line("beta_h", {base.beta_h}),
    };
    auto axis_meta = [](const Axis& a) {
        return "axis " + a.name + (a.log ? " log " : " lin ") + fmt(a.start) + " " + fmt(a.stop) + " " +
               std::to_string(a.count);
    };

    if (f == FigurePreset::Fig2b || f == FigurePreset::Fig3a) {
        const Axis bc{"beta_c", 1.5 * base.beta_h * base.omega_h / base.omega_c, 0.1, 100, true};
        const Axis al{"alpha", 1e-3, 1.0, 200, true};
        meta.push_back(axis_meta(bc));
        meta.push_back(axis_meta(al));
        meta.push_back("method closed");
        SweepSpec s{{bc, al}, base, {EngineKind::Coherent, EngineKind::Incoherent}, Method::Closed};
        run_sweep(s, csv, meta);

        out.has_ratio_table = true;
        if (ratio_csv)
            *ratio_csv << "# schema " << kCsvSchema << "\n# preset " << pi.name
                       << "\nbeta_c,alpha,power_ratio,nsr_ratio\n";
        double best_p = 0, best_n = 0, bp[2] = {0, 0}, bn[2] = {0, 0};
        for (double b : bc.values())
            for (double a : al.values()) {
                EngineParams p = base;
                p.beta_c = b;
                p.alpha = a;
                p.kind = EngineKind::Coherent;
                const Row rc = evaluate_row(p, Method::Closed);
                p.kind = EngineKind::Incoherent;
                const Row ri = evaluate_row(p, Method::Closed);
                const double pr = rc.power / ri.power, nr = ri.nsr / rc.nsr;
                if (ratio_csv)
                    *ratio_csv << format_double(b) << ',' << format_double(a) << ',' << format_double(pr) << ','
                               << format_double(nr) << "\n";
                if (pr > best_p) {
                    best_p = pr;
                    bp[0] = b;
                    bp[1] = a;
                }
                if (nr > best_n) {
                    best_n = nr;
                    bn[0] = b;
                    bn[1] = a;
                }
            }
        if (f == FigurePreset::Fig2b)
            out.headline.push_back(line("max_power_ratio beta_c alpha", {best_p, bp[0], bp[1]}));
        else
            out.headline.push_back(line("max_nsr_ratio beta_c alpha", {best_n, bn[0], bn[1]}));
        return out;
    }

    if (f == FigurePreset::AlphaCrit) {
        const Axis bc{"beta_c", 1.5 * base.beta_h * base.omega_h / base.omega_c, 10.0, 400, true};
        meta.push_back(axis_meta(bc));
        meta.push_back("alpha set to the critical value at each beta_c");
        meta.push_back("method numeric");
        csv << "# schema " << kCsvSchema << "\n";
        for (const auto& m : meta)
            csv << "# " << m << "\n";
        csv << csv_header() << "\n";
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (EngineKind k : {EngineKind::Coherent, EngineKind::Incoherent})
            for (double b : bc.values()) {
                EngineParams p = base;
                p.kind = k;
                p.beta_c = b;
                p.alpha = critical_alpha(p);
                lo = std::min(lo, p.alpha);
                hi = std::max(hi, p.alpha);
                csv << csv_line(evaluate_row(p, Method::Numeric)) << "\n";
            }
        out.headline.push_back(line("alpha_cr_range", {lo, hi}));
        return out;
    }

    // 1-D alpha sweeps
    meta.push_back(line("beta_c", {base.beta_c}));
    meta.push_back(axis_meta(kAlphaAxis));
    meta.push_back("method numeric");
    csv << "# schema " << kCsvSchema << "\n";
    for (const auto& m : meta)
        csv << "# " << m << "\n";
    csv << csv_header() << "\n";
    std::vector<Row> rows[2];
    const EngineKind kinds[2] = {EngineKind::Coherent, EngineKind::Incoherent};
    for (int k = 0; k < 2; ++k)
        for (double a : kAlphaAxis.values()) {
            EngineParams p = base;
            p.kind = kinds[k];
            p.alpha = a;
            rows[k].push_back(evaluate_row(p, Method::Numeric));
            csv << csv_line(rows[k].back()) << "\n";
        }

    auto argmin = [](const std::vector<Row>& rs, auto key) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (key(rs[i]) < key(rs[best]))
                best = i;
        return best;
    };
    auto rel_slack = [](const Row& r) { return r.slack / r.f_qtur; };
    auto q = [](const Row& r) { return r.q_ctur; };

    switch (f) {
    case FigurePreset::Fig2a: {
        double best = 0, at = 0;
        for (std::size_t i = 0; i < rows[0].size(); ++i) {
            const double ratio = rows[0][i].power / rows[1][i].power;
            if (ratio > best) {
                best = ratio;
                at = rows[0][i].p.alpha;
            }
        }
        out.headline.push_back(line("max_power_ratio alpha", {best, at}));
        out.headline.push_back(line("efficiency", {rows[0][0].efficiency}));
        break;
    }
    case FigurePreset::Fig3b:
    case FigurePreset::Fig3c: {
        const char* keys[2] = {"min_relative_slack_coherent alpha", "min_relative_slack_incoherent alpha"};
        for (int k = 0; k < 2; ++k) {
            const std::size_t i = argmin(rows[k], rel_slack);
            out.headline.push_back(line(keys[k], {rel_slack(rows[k][i]), rows[k][i].p.alpha}));
        }
        break;
    }
    case FigurePreset::Fig4a:
    case FigurePreset::Fig4b: {
        const char* keys[2] = {"min_q_coherent alpha", "min_q_incoherent alpha"};
        for (int k = 0; k < 2; ++k) {
            const std::size_t i = argmin(rows[k], q);
            out.headline.push_back(line(keys[k], {q(rows[k][i]), rows[k][i].p.alpha}));
        }
        if (f == FigurePreset::Fig4a) {
            const char* wkeys[2] = {"ctur_violation_window_coherent", "ctur_violation_window_incoherent"};
            for (int k = 0; k < 2; ++k) {
                double lo = kNaN, hi = kNaN;
                for (const auto& r : rows[k])
                    if (r.q_ctur < 2) {
                        if (std::isnan(lo))
                            lo = r.p.alpha;
                        hi = r.p.alpha;
                    }
                out.headline.push_back(line(wkeys[k], {lo, hi}));
            }
        }
        break;
    }
    default:
        break;
    }
    return out;
}

// ----------------------------------------------------------------- validation

namespace {

double rel(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

struct Checker {
    ValidationSummary& sum;
    std::string where;
    void expect(bool ok, const std::string& what, double excess)
    {
        if (!ok)
            sum.failures.push_back(where + ": " + what + " (value " + format_double(excess) + ")");
    }
    void within(double value, double tol, const std::string& what) { expect(value <= tol, what, value / tol); }
};

std::string describe(const EngineParams& p)
{
    return to_string(p.kind) + " g0=" + fmt(p.gamma0) + " wh=" + fmt(p.omega_h) + " wc=" + fmt(p.omega_c) +
           " bh=" + fmt(p.beta_h) + " bc=" + fmt(p.beta_c) + " alpha=" + fmt(p.alpha);
}

void validate_point(const EngineParams& p, Checker& c)
{
    const ComplexMatrix l = liouvillian(p);
    const CVector vi = vec_identity(working_dim(p.kind));
    double col = 0;
    for (std::size_t j = 0; j < l.cols(); ++j) {
        cplx s = 0;
        for (std::size_t i = 0; i < l.rows(); ++i)
            s += vi[i] * l(i, j);
        col = std::max(col, std::abs(s));
    }
    c.within(col, 1e-13, "trace preservation");

    const DensityMatrix rn = steady_numeric(l), rc = steady_closed(p);
    double diff = 0;
    for (std::size_t i = 0; i < rn.dim(); ++i)
        for (std::size_t j = 0; j < rn.dim(); ++j)
            diff = std::max(diff, std::abs(rn.m(i, j) - rc.m(i, j)));
    c.within(diff, 1e-10, "numeric vs closed steady state");
    const DensityCheck dc = check_density(rn);
    c.expect(dc.ok(), "steady state is a density matrix", dc.hermiticity + dc.trace_error);
    c.within(rel(coherence_l1(rc), coherence_closed(p)), 1e-12, "coherence closed form");

    const Observables o = observables(p);
    c.within(std::abs(o.j_hot + o.j_cold + o.power), 1e-10 * std::abs(o.power) + 1e-300, "first law");
    c.expect(o.entropy_rate >= 0, "entropy production >= 0", o.entropy_rate);
    c.expect(o.power <= 0 && o.j_hot >= 0, "engine signs", o.power);
    c.within(rel(o.power, o.power_commutator), 1e-11, "power via commutator");

    const Occupations occ = occupations(p);
    const double lg = bias_log(occ.n_h, occ.n_c);
    const double fp = population_fano(occ.n_h, occ.n_c);
    c.expect(lg * fp >= 2, "classical baseline >= 2", lg * fp);
    c.within(rel(k_coefficient(p), k_three_term(p)), 1e-10, "k identity");

    const FanoReport fr = fano(p);
    double nsr_power = 0;
    double means[4];
    int idx = 0;
    for (auto obs : {CountedObservable::Power, CountedObservable::HotCurrent, CountedObservable::ColdCurrent,
                     CountedObservable::PhotonFlux}) {
        const CumulantReport n = cumulants(p, obs), cl = cumulants_closed(p, obs);
        c.within(rel(n.mean, cl.mean), 1e-6, "mean vs closed form (" + to_string(obs) + ")");
        c.within(rel(n.variance, cl.variance), 1e-6, "variance vs closed form (" + to_string(obs) + ")");
        if (obs == CountedObservable::Power) {
            nsr_power = n.nsr;
            c.within(rel(n.mean, o.power), 1e-8, "cumulant mean vs observables");
        } else {
            c.within(rel(n.nsr, nsr_power), 1e-10, "nsr equality (" + to_string(obs) + ")");
        }
        if (obs == CountedObservable::PhotonFlux)
            c.within(rel(n.variance / n.mean, fr.f_total), 1e-10, "variance/mean vs Fano");
        means[idx++] = n.mean;
    }
    c.within(std::abs(means[0] + means[1] + means[2]), 1e-9 * std::abs(means[0]), "first law (cumulants)");
    const double nsr_law = fr.f_total / (p.alpha * coherence_closed(p));
    c.within(rel(nsr_power, nsr_law), 1e-8, "nsr-coherence law");

    const QturBound b = qtur_bound(p);
    c.expect(nsr_power >= b.f - 1e-9, "qTUR bound", nsr_power - b.f);
    c.within(rel(b.f, qtur_bound_closed(p)), 1e-8, "qTUR closed form");
    c.within(std::abs(b.psi_imag), 1e-10 * std::max(1.0, std::abs(b.psi)), "psi imaginary residue");

    const ComplexMatrix ld = drazin(l, rn);
    const std::size_t n = l.rows();
    const CVector vr = vec(rn.m);
    ComplexMatrix proj(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            proj(i, j) = vr[i] * vi[j];
    const ComplexMatrix q = ComplexMatrix::identity(n) - proj;
    // L+ is stored in double; its rounding alone is eps*|L+|, amplified by |L|
    const double cond = 1.0 + l.norm_inf() * ld.norm_inf();
    c.within((l * ld - q).max_abs(), 1e-12 * cond, "Drazin L L+ = I - P");
    c.within((ld * l - q).max_abs(), 1e-12 * cond, "Drazin L+ L = I - P");
    c.within((ld * proj).max_abs() + (proj * ld).max_abs(), 1e-12 * cond, "Drazin L+ P = P L+ = 0");

    if (occ.n_c > 0) {
        const CturReport ct = ctur(p);
        c.within(rel(ct.q, ct.d), 1e-10, "q = d");
        const double ac = critical_alpha(p);
        EngineParams pc = p, pi = p;
        pc.alpha = pi.alpha = ac;
        pc.kind = EngineKind::Coherent;
        pi.kind = EngineKind::Incoherent;
        const double cc = coherence_closed(pc), ci = coherence_closed(pi);
        c.within(std::abs(cc - ci), 1e-10 * cc, "critical alpha equal coherence");
    }
}

} // namespace

ValidationSummary run_validation(std::uint64_t seed, int samples)
{
    if (samples < 1)
        throw InvalidArgument("samples must be >= 1");
    ValidationSummary sum;
    ParamSampler rng(seed);
    for (int s = 0; s < samples; ++s)
        for (EngineKind k : {EngineKind::Coherent, EngineKind::Incoherent}) {
            const EngineParams p = rng.any(k);
            if (!engine_valid(p)) {
                ++sum.not_an_engine;
                continue;
            }
            ++sum.checked;
            Checker c{sum, "sample " + std::to_string(s) + " " + describe(p)};
            try {
                validate_point(p, c);
            } catch (const Error& e) {
                sum.failures.push_back(c.where + ": " + e.what());
            }
        }
    return sum;
}

} // namespace qengine
