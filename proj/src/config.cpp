#include "riscov/config.hpp"
#include "riscov/csv_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace riscov {

namespace {

namespace pt = boost::property_tree;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) {
            return d;
        }
    } catch (const std::exception&) {
    }
    throw std::runtime_error("config: '" + key + "' expects a number, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const auto u = std::stoull(v, &pos);
        if (trim(v.substr(pos)).empty() && v.find('-') == std::string::npos) {
            return u;
        }
    } catch (const std::exception&) {
    }
    throw std::runtime_error("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(static_cast<T>(conv(key, item)));
        }
    }
    return out;
}

// Unit conversions are rounded to 1e-9 so that 30 degrees prints as 30.
double unscale(double v, double scale) {
    return scale == 1.0 ? v : std::round(v / scale * 1e9) / 1e9;
}

std::string fmt(double v) {
    return format_number(v);
}

template <typename T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ", ";
        }
        if constexpr (std::is_floating_point_v<T>) {
            s += fmt(v[i]);
        } else {
            s += std::to_string(v[i]);
        }
    }
    return s;
}

// One entry per accepted key: a setter from text and a getter to text.
struct Field {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename M>
Field real(M member) {
    return {[member](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*member = to_double(k, v); },
            [member](const ExperimentConfig& c) { return fmt(c.*member); }};
}

template <typename S, typename M>
Field real_in(S section, M member, double scale = 1.0) {
    return {[=](ExperimentConfig& c, const std::string& k, const std::string& v) {
                (c.*section).*member = to_double(k, v) * scale;
            },
            [=](const ExperimentConfig& c) { return fmt(unscale((c.*section).*member, scale)); }};
}

template <typename S, typename M>
Field uint_in(S section, M member) {
    using T = std::remove_reference_t<decltype(std::declval<ExperimentConfig&>().*section.*member)>;
    return {[=](ExperimentConfig& c, const std::string& k, const std::string& v) {
                (c.*section).*member = static_cast<T>(to_u64(k, v));
            },
            [=](const ExperimentConfig& c) { return std::to_string((c.*section).*member); }};
}

template <typename M>
Field uint(M member) {
    using T = std::remove_reference_t<decltype(std::declval<ExperimentConfig&>().*member)>;
    return {[=](ExperimentConfig& c, const std::string& k, const std::string& v) {
                c.*member = static_cast<T>(to_u64(k, v));
            },
            [=](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

template <typename M>
Field real_list(M member) {
    return {[=](ExperimentConfig& c, const std::string& k, const std::string& v) {
                c.*member = to_list<double>(k, v, to_double);
            },
            [=](const ExperimentConfig& c) { return fmt_list(c.*member); }};
}

const std::map<std::string, Field>& fields() {
    using C = ExperimentConfig;
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        t["scene.area_x"] = real_in(&C::scene, &SceneConfig::area_x);
        t["scene.area_y"] = real_in(&C::scene, &SceneConfig::area_y);
        t["scene.lambda_b_prime"] = real_in(&C::scene, &SceneConfig::lambda_b_prime);
        t["scene.l_min"] = real_in(&C::scene, &SceneConfig::l_min);
        t["scene.l_max"] = real_in(&C::scene, &SceneConfig::l_max);
        t["scene.w_min"] = real_in(&C::scene, &SceneConfig::w_min);
        t["scene.w_max"] = real_in(&C::scene, &SceneConfig::w_max);
        t["scene.h_min"] = real_in(&C::scene, &SceneConfig::h_min);
        t["scene.h_max"] = real_in(&C::scene, &SceneConfig::h_max);
        t["scene.n1"] = uint_in(&C::scene, &SceneConfig::n1);
        t["scene.n2"] = uint_in(&C::scene, &SceneConfig::n2);

        t["channel.p_t"] = real_in(&C::channel, &ChannelParams::p_t);
        t["channel.g_t"] = real_in(&C::channel, &ChannelParams::g_t);
        t["channel.g_r"] = real_in(&C::channel, &ChannelParams::g_r);
        t["channel.g"] = real_in(&C::channel, &ChannelParams::g);
        t["channel.m"] = real_in(&C::channel, &ChannelParams::m);
        t["channel.n"] = real_in(&C::channel, &ChannelParams::n);
        t["channel.d_x"] = real_in(&C::channel, &ChannelParams::d_x);
        t["channel.d_y"] = real_in(&C::channel, &ChannelParams::d_y);
        t["channel.f_c"] = real_in(&C::channel, &ChannelParams::f_c);
        t["channel.a"] = real_in(&C::channel, &ChannelParams::a);
        t["channel.epsilon"] = real_in(&C::channel, &ChannelParams::epsilon);
        t["channel.r_max"] = real_in(&C::channel, &ChannelParams::r_max);

        t["dome.h_s_km"] = real_in(&C::dome, &DomeConfig::h_s, 1000.0);
        t["dome.theta_min_deg"] = real_in(&C::dome, &DomeConfig::theta_min, kDeg);
        t["dome.k"] = uint_in(&C::dome, &DomeConfig::k);

        t["pga.n_p"] = uint_in(&C::pga, &PgaParams::n_p);
        t["pga.s_p"] = uint_in(&C::pga, &PgaParams::s_p);
        t["pga.n_g"] = uint_in(&C::pga, &PgaParams::n_g);
        t["pga.interval"] = uint_in(&C::pga, &PgaParams::interval);
        t["pga.n_m"] = uint_in(&C::pga, &PgaParams::n_m);
        t["pga.e1"] = uint_in(&C::pga, &PgaParams::e1);
        t["pga.e2"] = uint_in(&C::pga, &PgaParams::e2);
        t["pga.tournament"] = uint_in(&C::pga, &PgaParams::tournament);
        t["pga.crossover_rate"] = real_in(&C::pga, &PgaParams::crossover_rate);
        t["pga.mutation_rate"] = real_in(&C::pga, &PgaParams::mutation_rate);
        t["pga.stall_rounds"] = uint_in(&C::pga, &PgaParams::stall_rounds);
        t["pga.cache"] = {[](C& c, const std::string& k, const std::string& v) {
                              if (v == "true" || v == "1") {
                                  c.pga.cache = true;
                              } else if (v == "false" || v == "0") {
                                  c.pga.cache = false;
                              } else {
                                  throw std::runtime_error("config: '" + k + "' expects true/false, got '" + v + "'");
                              }
                          },
                          [](const C& c) { return std::string(c.pga.cache ? "true" : "false"); }};

        t["bound.eta1"] = real_in(&C::bound, &BoundModelConfig::eta1);
        t["bound.eta2"] = real_in(&C::bound, &BoundModelConfig::eta2);
        t["bound.grid_size"] = uint_in(&C::bound, &BoundModelConfig::grid_size);

        t["experiment.gamma_list"] = real_list(&C::gamma_list);
        t["experiment.k_train"] = uint(&C::k_train);
        t["experiment.n_test_sets"] = uint(&C::n_test_sets);
        t["experiment.test_set_size"] = uint(&C::test_set_size);
        t["experiment.random_draws"] = uint(&C::random_draws);
        t["experiment.master_seed"] = uint(&C::master_seed);
        t["experiment.train_test_slack"] = real(&C::train_test_slack);
        t["experiment.fig3_elevations_deg"] = real_list(&C::fig3_elevations_deg);
        t["experiment.fig3_azimuth_deg"] = {
            [](C& c, const std::string& k, const std::string& v) { c.fig3_azimuth = to_double(k, v) * kDeg; },
            [](const C& c) { return fmt(unscale(c.fig3_azimuth, kDeg)); }};
        t["experiment.fig3_buildings"] = uint(&C::fig3_buildings);
        t["experiment.fig3_area_x"] = real(&C::fig3_area_x);
        t["experiment.fig3_area_y"] = real(&C::fig3_area_y);
        t["experiment.fig3_gamma"] = real(&C::fig3_gamma);
        t["experiment.fig4_densities"] = real_list(&C::fig4_densities);
        t["experiment.fig4_gammas"] = real_list(&C::fig4_gammas);
        t["experiment.fig4_k"] = uint(&C::fig4_k);
        t["experiment.fig5_k_list"] = {[](C& c, const std::string& k, const std::string& v) {
                                           c.fig5_k_list = to_list<std::size_t>(k, v, to_u64);
                                       },
                                       [](const C& c) { return fmt_list(c.fig5_k_list); }};
        t["experiment.fig5_gamma"] = real(&C::fig5_gamma);
        return t;
    }();
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    const auto& table = fields();
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw std::runtime_error("config: key '" + section + "' must live inside a section");
        }
        for (const auto& [name, value] : body) {
            const std::string key = section + "." + name;
            const auto it = table.find(key);
            if (it == table.end()) {
                throw std::runtime_error("config: unknown key '" + key + "'");
            }
            it->second.set(cfg, key, trim(value.data()));
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open '" + path + "'");
    }
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
    std::string current;
    for (const auto& [key, field] : fields()) {
        const auto dot = key.find('.');
        const std::string section = key.substr(0, dot);
        if (section != current) {
            out << (current.empty() ? "" : "\n") << '[' << section << "]\n";
            current = section;
        }
        out << key.substr(dot + 1) << " = " << field.get(cfg) << '\n';
    }
}

}  // namespace riscov
