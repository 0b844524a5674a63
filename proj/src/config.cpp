#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace idob {

namespace {

struct Field {
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

double parse_double(const std::string& v) {
    double x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw Error(ErrorCode::Config, "not a number: '" + v + "'");
    return x;
}

long long parse_int(const std::string& v) {
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw Error(ErrorCode::Config, "not an integer: '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw Error(ErrorCode::Config, "not a boolean: '" + v + "'");
}

template <class T>
Field num(T Config::*member) {
    return {[member](Config& c, const std::string& v) { c.*member = static_cast<T>(parse_double(v)); },
            [member](const Config& c) { return format_double(static_cast<double>(c.*member)); }};
}

template <class T>
Field integer(T Config::*member) {
    return {[member](Config& c, const std::string& v) { c.*member = static_cast<T>(parse_int(v)); },
            [member](const Config& c) { return std::to_string(c.*member); }};
}

Field phys(double PhysParams::*member) {
    return {[member](Config& c, const std::string& v) { c.phys.*member = parse_double(v); },
            [member](const Config& c) { return format_double(c.phys.*member); }};
}

Field gain(double BacksteppingGains::*member) {
    return {[member](Config& c, const std::string& v) { c.gains.*member = parse_double(v); },
            [member](const Config& c) { return format_double(c.gains.*member); }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = {
        {"mass", phys(&PhysParams::m)},
        {"arm", phys(&PhysParams::arm)},
        {"gravity", phys(&PhysParams::g)},
        {"jx", phys(&PhysParams::Jx)},
        {"jy", phys(&PhysParams::Jy)},
        {"jz", phys(&PhysParams::Jz)},
        {"kf", phys(&PhysParams::kF)},
        {"km", phys(&PhysParams::kM)},
        {"dt", num(&Config::dt)},
        {"k1", gain(&BacksteppingGains::k1)},
        {"k2", gain(&BacksteppingGains::k2)},
        {"k3", gain(&BacksteppingGains::k3)},
        {"k4", gain(&BacksteppingGains::k4)},
        {"k5", gain(&BacksteppingGains::k5)},
        {"k6", gain(&BacksteppingGains::k6)},
        {"kz_p", gain(&BacksteppingGains::kz_p)},
        {"kz_d", gain(&BacksteppingGains::kz_d)},
        {"model",
         {[](Config& c, const std::string& v) {
              if (v == "full") c.model = Model::Full;
              else if (v == "simplified") c.model = Model::Simplified;
              else throw Error(ErrorCode::Config, "expected full or simplified");
          },
          [](const Config& c) { return std::string(c.model == Model::Full ? "full" : "simplified"); }}},
        {"dob_enabled",
         {[](Config& c, const std::string& v) { c.dob_enabled = parse_bool(v); },
          [](const Config& c) { return std::string(c.dob_enabled ? "true" : "false"); }}},
        {"d_rolloff_rad_s", num(&Config::d_rolloff_rad_s)},
        {"estimate_sat", num(&Config::estimate_sat)},
        {"thrust_max_factor", num(&Config::thrust_max_factor)},
        {"torque_sat", num(&Config::torque_sat)},
        {"duration", num(&Config::duration)},
        {"t_grasp", num(&Config::t_grasp)},
        {"t_release", num(&Config::t_release)},
        {"ramp_s", num(&Config::ramp_s)},
        {"takeoff_s", num(&Config::takeoff_s)},
        {"hover_before_image_s", num(&Config::hover_before_image_s)},
        {"start_x", num(&Config::start_x)},
        {"start_y", num(&Config::start_y)},
        {"start_z", num(&Config::start_z)},
        {"waypoint_x", num(&Config::waypoint_x)},
        {"waypoint_y", num(&Config::waypoint_y)},
        {"waypoint_z", num(&Config::waypoint_z)},
        {"base_magnitude", num(&Config::base_magnitude)},
        {"n_classes", integer(&Config::n_classes)},
        {"n_taps", integer(&Config::n_taps)},
        {"gamma_cap", num(&Config::gamma_cap)},
        {"pad_seconds", num(&Config::pad_seconds)},
        {"seed", integer(&Config::seed)},
        {"n_images", integer(&Config::n_images)},
        {"n_train", integer(&Config::n_train)},
        {"n_val", integer(&Config::n_val)},
        {"cnn_filters", integer(&Config::cnn_filters)},
        {"cnn_epochs", integer(&Config::cnn_epochs)},
        {"cnn_lr", num(&Config::cnn_lr)},
        {"lstm_samples", integer(&Config::lstm_samples)},
        {"lstm_hidden", integer(&Config::lstm_hidden)},
        {"lstm_epochs", integer(&Config::lstm_epochs)},
        {"lstm_batch", integer(&Config::lstm_batch)},
        {"lstm_downsample", integer(&Config::lstm_downsample)},
        {"lstm_lr", num(&Config::lstm_lr)},
        {"lstm_amp_min", num(&Config::lstm_amp_min)},
        {"lstm_amp_max", num(&Config::lstm_amp_max)},
        {"lstm_jitter_s", num(&Config::lstm_jitter_s)},
    };
    return f;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw Error(ErrorCode::Config, "unknown key '" + key + "'");
    try {
        it->second.set(*this, value);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, "key '" + key + "': " + e.what());
    }
}

std::string Config::get(const std::string& key) const {
    const auto it = fields().find(key);
    if (it == fields().end()) throw Error(ErrorCode::Config, "unknown key '" + key + "'");
    return it->second.get(*this);
}

const std::vector<std::string>& Config::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [name, f] : fields()) out.push_back(name);
        return out;
    }();
    return k;
}

void Config::validate() const {
    try {
        phys.validate();
        gains.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw Error(ErrorCode::Config, msg);
    };
    need(dt > 0, "dt must be positive");
    need(d_rolloff_rad_s > 0 && d_rolloff_rad_s < M_PI / dt, "d_rolloff_rad_s must lie in (0, pi/dt)");
    need(0 < t_grasp && t_grasp < t_release && t_release + ramp_s <= duration,
         "need 0 < t_grasp < t_release and release ramp inside the duration");
    need(ramp_s >= 0 && t_grasp + ramp_s <= t_release, "ramps overlap");
    need(takeoff_s > 0 && takeoff_s <= t_grasp, "takeoff must finish before the grasp");
    need(hover_before_image_s >= 0, "hover_before_image_s must be non-negative");
    need(n_classes >= 1, "n_classes must be >= 1");
    need(n_taps >= 1, "n_taps must be >= 1");
    need(thrust_max_factor > 1 && torque_sat > 0, "actuator limits must be positive");
    need(n_train + n_val < n_images && n_train > 0 && n_val > 0, "image split sizes");
    need(lstm_samples >= 1 && lstm_batch >= 1 && lstm_hidden >= 1 && lstm_downsample >= 1,
         "lstm sizes must be positive");
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw Error(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

void save_config(const Config& c, const std::string& path) {
    std::ostringstream os;
    for (const auto& k : Config::keys()) os << k << " = " << c.get(k) << "\n";
    write_text_file(path, os.str());
}

}  // namespace idob
