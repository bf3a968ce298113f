#include "copol/runconfig.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "copol/csv.hpp"
#include "copol/lattice.hpp"

namespace copol {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw DomainError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw DomainError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
    std::vector<int> out;
    for (const std::string& s : split_csv(v)) out.push_back(static_cast<int>(parse_int(s, key)));
    if (out.empty()) throw DomainError("config: empty list for " + key);
    return out;
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    for (const std::string& s : split_csv(v)) out.push_back(parse_double(s, key));
    if (out.empty()) throw DomainError("config: empty list for " + key);
    return out;
}

template <class T>
std::string join_list(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, double>)
            out += format_double(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

void RunConfig::apply_override(const std::string& key, const std::string& value) {
    if (key == "alpha") alpha = parse_double(value, key);
    else if (key == "beta") beta = parse_double(value, key);
    else if (key == "p") p = parse_double(value, key);
    else if (key == "M") M = static_cast<int>(parse_int(value, key));
    else if (key == "m") m = static_cast<int>(parse_int(value, key));
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "threads") threads = static_cast<int>(parse_int(value, key));
    else if (key == "budget") budget = parse_int(value, key);
    else if (key == "out") out_dir = value;
    else if (key == "entropy.ladder") entropy_ladder = parse_int_list(value, key);
    else if (key == "entropy.u_max") entropy_u_max = parse_double(value, key);
    else if (key == "entropy.u_step") entropy_u_step = parse_double(value, key);
    else if (key == "entropy.l_values") entropy_l_values = parse_double_list(value, key);
    else if (key == "interface.mu_max") iface_mu_max = parse_double(value, key);
    else if (key == "interface.mu_step") iface_mu_step = parse_double(value, key);
    else if (key == "interface.ladder") iface_ladder = parse_int_list(value, key);
    else if (key == "interface.samples") iface_samples = static_cast<int>(parse_int(value, key));
    else if (key == "family.strategies") family_strategies = static_cast<int>(parse_int(value, key));
    else if (key == "family.columns") family_columns = static_cast<int>(parse_int(value, key));
    else if (key == "scan.alpha_min") scan_alpha_min = parse_double(value, key);
    else if (key == "scan.alpha_max") scan_alpha_max = parse_double(value, key);
    else if (key == "scan.beta_min") scan_beta_min = parse_double(value, key);
    else if (key == "scan.beta_max") scan_beta_max = parse_double(value, key);
    else if (key == "scan.alpha_steps") scan_alpha_steps = static_cast<int>(parse_int(value, key));
    else if (key == "scan.beta_steps") scan_beta_steps = static_cast<int>(parse_int(value, key));
    else if (key == "scan.margin") scan_margin = parse_double(value, key);
    else if (key == "scan.iface_samples") scan_iface_samples = static_cast<int>(parse_int(value, key));
    else if (key == "scan.iface_mu_step") scan_iface_mu_step = parse_double(value, key);
    else if (key == "scan.iface_ladder") scan_iface_ladder = parse_int_list(value, key);
    else if (key == "scan.critical_alphas") critical_alphas = parse_double_list(value, key);
    else if (key == "dinkelbach.tol") dinkelbach_tol = parse_double(value, key);
    else
        throw DomainError("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) + " is not key = value");
        cfg.apply_override(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> m_;
    m_["alpha"] = format_double(alpha);
    m_["beta"] = format_double(beta);
    m_["p"] = format_double(p);
    m_["M"] = std::to_string(M);
    m_["m"] = std::to_string(m);
    m_["seed"] = std::to_string(seed);
    m_["threads"] = std::to_string(threads);
    m_["budget"] = std::to_string(budget);
    m_["out"] = out_dir;
    m_["entropy.ladder"] = join_list(entropy_ladder);
    m_["entropy.u_max"] = format_double(entropy_u_max);
    m_["entropy.u_step"] = format_double(entropy_u_step);
    m_["entropy.l_values"] = join_list(entropy_l_values);
    m_["interface.mu_max"] = format_double(iface_mu_max);
    m_["interface.mu_step"] = format_double(iface_mu_step);
    m_["interface.ladder"] = join_list(iface_ladder);
    m_["interface.samples"] = std::to_string(iface_samples);
    m_["family.strategies"] = std::to_string(family_strategies);
    m_["family.columns"] = std::to_string(family_columns);
    m_["scan.alpha_min"] = format_double(scan_alpha_min);
    m_["scan.alpha_max"] = format_double(scan_alpha_max);
    m_["scan.beta_min"] = format_double(scan_beta_min);
    m_["scan.beta_max"] = format_double(scan_beta_max);
    m_["scan.alpha_steps"] = std::to_string(scan_alpha_steps);
    m_["scan.beta_steps"] = std::to_string(scan_beta_steps);
    m_["scan.margin"] = format_double(scan_margin);
    m_["scan.iface_samples"] = std::to_string(scan_iface_samples);
    m_["scan.iface_mu_step"] = format_double(scan_iface_mu_step);
    m_["scan.iface_ladder"] = join_list(scan_iface_ladder);
    m_["scan.critical_alphas"] = join_list(critical_alphas);
    m_["dinkelbach.tol"] = format_double(dinkelbach_tol);
    return m_;
}

} // namespace copol
