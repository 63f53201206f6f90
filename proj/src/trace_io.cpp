#include "griffith/trace_io.hpp"

#include "griffith/detail/number_format.hpp"
#include "griffith/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace griffith {

using nlohmann::json;

namespace {

std::string crack_list(const CrackState& c) {
    std::string out;
    bool first = true;
    for (int f : c.facet_list()) {
        if (!first) out += ';';
        out += std::to_string(f);
        first = false;
    }
    return out;
}

} // namespace

std::string trace_to_csv(const EvolutionTrace& trace) {
    std::ostringstream os;
    os << "griffith-trace-csv v1\n";
    os << "step,time,crack_facets,bulk,crack,body_work,surface_work,elastic,total,theta,"
          "cumulative_work,competitor_gap,euler_residual,oracle_certified\n";
    auto d = [](double v) { return detail::fmt_double(v); };
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& r = trace.steps[i];
        os << i << ',' << d(r.time) << ',' << crack_list(r.crack) << ',' << d(r.energy.bulk) << ','
           << d(r.energy.crack) << ',' << d(r.energy.body_work) << ',' << d(r.energy.surface_work)
           << ',' << d(r.energy.elastic) << ',' << d(r.energy.total) << ',' << d(r.theta) << ','
           << d(r.cumulative_work) << ',' << d(r.competitor_gap) << ',' << d(r.euler_residual)
           << ',' << (r.oracle_certified ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string trace_to_json(const EvolutionTrace& trace) {
    json j;
    j["format"] = "griffith-trace";
    j["version"] = 1;
    j["warnings"] = trace.warnings;
    json steps = json::array();
    for (const StepRecord& r : trace.steps) {
        json s;
        s["time"] = r.time;
        s["crack"] = r.crack.facet_list();
        s["energy"] = {{"bulk", r.energy.bulk},
                       {"crack", r.energy.crack},
                       {"body_work", r.energy.body_work},
                       {"surface_work", r.energy.surface_work},
                       {"elastic", r.energy.elastic},
                       {"total", r.energy.total},
                       {"internal", r.energy.internal},
                       {"load_work", r.energy.load_work}};
        s["theta"] = r.theta;
        s["cumulative_work"] = r.cumulative_work;
        s["competitor_gap"] = r.competitor_gap;
        s["euler_residual"] = r.euler_residual;
        s["oracle_certified"] = r.oracle_certified;
        s["u"] = r.u_values;
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    return j.dump(2);
}

EvolutionTrace trace_from_json(const std::string& text, const Mesh& mesh) {
    json j = json::parse(text);
    if (j.value("format", "") != "griffith-trace" || j.value("version", 0) != 1)
        throw std::runtime_error("not a griffith-trace v1 document");
    EvolutionTrace trace;
    trace.warnings = j["warnings"].get<std::vector<std::string>>();
    for (const auto& s : j["steps"]) {
        StepRecord r;
        r.time = s["time"].get<double>();
        r.crack = CrackState::empty(mesh);
        for (int f : s["crack"].get<std::vector<int>>()) r.crack.add(f);
        const auto& e = s["energy"];
        r.energy.bulk = e["bulk"].get<double>();
        r.energy.crack = e["crack"].get<double>();
        r.energy.body_work = e["body_work"].get<double>();
        r.energy.surface_work = e["surface_work"].get<double>();
        r.energy.elastic = e["elastic"].get<double>();
        r.energy.total = e["total"].get<double>();
        r.energy.internal = e["internal"].get<double>();
        r.energy.load_work = e["load_work"].get<double>();
        r.theta = s["theta"].get<double>();
        r.cumulative_work = s["cumulative_work"].get<double>();
        r.competitor_gap = s["competitor_gap"].get<double>();
        r.euler_residual = s["euler_residual"].get<double>();
        r.oracle_certified = s["oracle_certified"].get<bool>();
        r.u_values = s["u"].get<std::vector<double>>();
        trace.steps.push_back(std::move(r));
    }
    return trace;
}

std::string audit_to_csv(const AuditReport& rep) {
    std::ostringstream os;
    os << "griffith-audit-csv v1\n";
    os << "step,upper_gap\n";
    for (std::size_t i = 0; i < rep.upper_gap.size(); ++i)
        os << i << ',' << detail::fmt_double(rep.upper_gap[i]) << '\n';
    os << "# max_upper_gap = " << detail::fmt_double(rep.max_upper_gap) << '\n';
    os << "# balance_defect = " << detail::fmt_double(rep.balance_defect) << '\n';
    os << "# balance_defect_excl_jumps = " << detail::fmt_double(rep.balance_defect_excl_jumps)
       << '\n';
    os << "# min_competitor_gap = " << detail::fmt_double(rep.min_competitor_gap) << '\n';
    os << "# certified = " << (rep.certified ? 1 : 0) << '\n';
    return os.str();
}

std::string convergence_to_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "griffith-convergence-csv v1\n";
    os << "level,delta";
    for (double t : rep.probe_times) os << ",elastic@" << detail::fmt_double(t);
    for (double t : rep.probe_times) os << ",crack@" << detail::fmt_double(t);
    os << "\n";
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
        os << l << ',' << detail::fmt_double(rep.levels[l].delta);
        for (double v : rep.levels[l].elastic_at_probe) os << ',' << detail::fmt_double(v);
        for (double v : rep.levels[l].crack_at_probe) os << ',' << detail::fmt_double(v);
        os << '\n';
    }
    for (std::size_t l = 0; l < rep.theta_l1_diff.size(); ++l)
        os << "# theta_l1_diff[" << l << "] = " << detail::fmt_double(rep.theta_l1_diff[l]) << '\n';
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
        os << "# theta_series[" << l << "] =";
        for (double v : rep.levels[l].theta_series) os << ' ' << detail::fmt_double(v);
        os << '\n';
    }
    return os.str();
}

void write_trace(const EvolutionTrace& trace, const std::string& path_base) {
    write_file(path_base + ".csv", trace_to_csv(trace));
    write_file(path_base + ".json", trace_to_json(trace));
}

void write_trace(const AuditReport& report, const std::string& path_base) {
    write_file(path_base + ".csv", audit_to_csv(report));
}

void write_trace(const ConvergenceReport& report, const std::string& path_base) {
    write_file(path_base + ".csv", convergence_to_csv(report));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
    if (!f.good()) throw std::runtime_error("short write to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace griffith
