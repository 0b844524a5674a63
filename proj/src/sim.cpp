#include "sim.hpp"

#include <algorithm>
#include <cmath>

#include "control.hpp"
#include "errors.hpp"

namespace idob {

Metrics compute_metrics(const FlightLog& log) {
    Metrics m;
    m.ez_norm = two_norm(log.e);
    for (std::size_t k = 0; k < log.size(); ++k) {
        m.max_z_dev = std::max(m.max_z_dev, std::abs(log.e[k]));
        if (log.z[k] < 0) m.crashed = true;
    }
    return m;
}

std::size_t sample_count(const Config& c) {
    return static_cast<std::size_t>(std::lround(c.duration / c.dt)) + 1;
}

Reference reference_at(const Config& c, double t) {
    const double tau = std::clamp(t / c.takeoff_s, 0.0, 1.0);
    const double s = tau * tau * tau * (10 - 15 * tau + 6 * tau * tau);
    const double ds = 30 * tau * tau * (1 - tau) * (1 - tau) / c.takeoff_s;
    const double dds = 60 * tau * (1 - tau) * (1 - 2 * tau) / (c.takeoff_s * c.takeoff_s);
    Reference r;
    r.x = c.start_x + (c.waypoint_x - c.start_x) * s;
    r.y = c.start_y + (c.waypoint_y - c.start_y) * s;
    r.z = c.start_z + (c.waypoint_z - c.start_z) * s;
    r.vx = (c.waypoint_x - c.start_x) * ds;
    r.vy = (c.waypoint_y - c.start_y) * ds;
    r.vz = (c.waypoint_z - c.start_z) * ds;
    r.ax = (c.waypoint_x - c.start_x) * dds;
    r.ay = (c.waypoint_y - c.start_y) * dds;
    r.az = (c.waypoint_z - c.start_z) * dds;
    return r;
}

StateSpaceBlock config_gn(const Config& c) { return z_nominal_model(c.phys, c.dt); }

DobConfig config_dob(const Config& c) {
    DobConfig d = default_dob_config(config_gn(c), c.d_rolloff_rad_s, c.effective_estimate_sat());
    d.enabled = c.dob_enabled;
    return d;
}

StateSpaceBlock config_c_block(const Config& c) {
    return pd_controller_block(c.phys.m * c.gains.kz_p, c.phys.m * c.gains.kz_d, c.dt);
}

FlightResult simulate_flight(const Config& c, const FlightOptions& opt) {
    c.validate();
    const std::size_t N = sample_count(c);
    if ((!opt.d.empty() && opt.d.size() != N) || (!opt.d_f.empty() && opt.d_f.size() != N) ||
        (!opt.e_p.empty() && opt.e_p.size() != N))
        throw Error(ErrorCode::InvalidInput, "disturbance series length does not match the run");
    const PhysParams& p = c.phys;
    const double hover = p.hover_thrust();

    Controller ctrl(p, c.gains, c.dt);
    DobConfig dc = config_dob(c);
    dc.enabled = opt.dob;
    Dob dob(dc);

    QuadState s{};
    Reference hold;
    if (opt.hover_start) {
        hold = {c.waypoint_x, 0, c.waypoint_y, 0, c.waypoint_z, 0};
        s[6] = c.waypoint_x, s[8] = c.waypoint_y, s[10] = c.waypoint_z;
    } else {
        s[6] = c.start_x, s[8] = c.start_y, s[10] = c.start_z;
    }

    FlightResult res;
    FlightLog& L = res.log;
    for (auto* v : {&L.t, &L.x, &L.y, &L.z, &L.vx, &L.vy, &L.vz, &L.u1, &L.u2, &L.u3, &L.u4, &L.d,
                    &L.d_hat, &L.d_f, &L.e, &L.e_p})
        v->reserve(N);

    double u_prev = 0;  // applied thrust deviation at the previous step
    for (std::size_t k = 0; k < N; ++k) {
        const double t = k * c.dt;
        const Reference r = opt.hover_start ? hold : reference_at(c, t);
        ControlInput u;
        try {
            u = ctrl.step(s, r);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateDenominator) throw;
            u = ctrl.step_hold(s, r);
        }
        const double d = opt.d.empty() ? 0.0 : opt.d[k];
        const double df = opt.d_f.empty() ? 0.0 : opt.d_f[k];

        double d_hat = 0;
        if (opt.dob) {
            d_hat = dob.step(s[10] - r.z, u_prev);
            if (opt.force_zero_estimate) d_hat = 0;
        }
        const double u_dev = compensated_input(u.u1 - hover, dob.saturate(d_hat), df);
        u.u1 = std::clamp(hover + u_dev, 0.0, c.thrust_max_factor * hover);
        u.u2 = std::clamp(u.u2, -c.torque_sat, c.torque_sat);
        u.u3 = std::clamp(u.u3, -c.torque_sat, c.torque_sat);
        u.u4 = std::clamp(u.u4, -c.torque_sat, c.torque_sat);
        u_prev = u.u1 - hover;

        L.t.push_back(t);
        L.x.push_back(s[6]);
        L.y.push_back(s[8]);
        L.z.push_back(s[10]);
        L.vx.push_back(s[7]);
        L.vy.push_back(s[9]);
        L.vz.push_back(s[11]);
        L.u1.push_back(u.u1);
        L.u2.push_back(u.u2);
        L.u3.push_back(u.u3);
        L.u4.push_back(u.u4);
        L.d.push_back(d);
        L.d_hat.push_back(d_hat);
        L.d_f.push_back(df);
        L.e.push_back(r.z - s[10]);
        L.e_p.push_back(opt.e_p.empty() ? 0.0 : opt.e_p[k]);
        res.last_valid_step = static_cast<long>(k);

        try {
            s = rk4_step(s, u, p, d, c.dt, c.model, static_cast<long>(k));
        } catch (const StepError&) {
            res.diverged = true;
            break;
        }
        if (std::abs(s[10]) > 1e6) {
            res.diverged = true;
            break;
        }
    }
    res.metrics = compute_metrics(L);
    return res;
}

}  // namespace idob
