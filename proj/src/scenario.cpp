#include "owc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "owc/errors.hpp"
#include "owc/rng.hpp"

namespace owc {

using nlohmann::json;

RewardConfig Scenario::reward_config(Objective objective) const {
    RewardConfig cfg;
    cfg.objective = objective;
    // SINR thresholds are configured in dB but compared in the objective's
    // linear unit.
    cfg.qos_threshold = objective == Objective::TotalSinr
                            ? std::pow(10.0, reward.qos_threshold_sinr_db / 10.0)
                            : reward.qos_threshold_rate_bps_hz;
    cfg.penalty_weight = reward.penalty_weight;
    return cfg;
}

void Scenario::validate() const {
    auto require = [](bool ok, const std::string& message) {
        if (!ok) throw validation_error(message);
    };

    require(room.width > 0 && room.length > 0 && room.height > 0,
            "room dimensions must be > 0");
    for (const auto& [field, rho] : {std::pair<const char*, double>{"rho_walls", room.rho_walls},
                                     {"rho_ceiling", room.rho_ceiling},
                                     {"rho_floor", room.rho_floor}})
        require(rho >= 0.0 && rho <= 1.0,
                std::string("room.") + field + " must lie in [0, 1]");
    for (const auto& [field, grid] : {std::pair<const char*, double>{"grid_first", room.grid_first},
                                      {"grid_second", room.grid_second}})
        require(grid > 0.0 && grid <= room.min_dimension(),
                std::string("room.") + field +
                    " must be > 0 and no larger than the smallest room dimension");

    require(!wavelengths.empty(), "at least one wavelength is required");
    require(std::set<std::string>(wavelengths.begin(), wavelengths.end()).size() ==
                wavelengths.size(),
            "wavelength labels must be distinct");

    require(!transmitters.empty(), "at least one transmitter is required");
    for (std::size_t l = 0; l < transmitters.size(); ++l) {
        const Transmitter& tx = transmitters[l];
        const std::string where = "transmitters[" + std::to_string(l) + "]";
        require(tx.semi_angle_deg > 0.0 && tx.semi_angle_deg < 90.0,
                where + ".semi_angle_deg = " + std::to_string(tx.semi_angle_deg) +
                    " violates 0 < semi_angle_deg < 90");
        require(tx.elevation_deg >= -90.0 && tx.elevation_deg <= 0.0,
                where + ".elevation_deg must lie in [-90, 0] for ceiling-mounted sources");
        for (const std::string& label : wavelengths) {
            const auto it = tx.power_per_wavelength.find(label);
            require(it != tx.power_per_wavelength.end(),
                    where + " missing power for wavelength '" + label + "'");
            require(it->second >= 0.0,
                    where + " power for wavelength '" + label + "' must be >= 0");
        }
    }

    require(!receivers.empty(), "at least one user is required");
    require(receivers.size() <= num_slots(),
            "infeasible: " + std::to_string(receivers.size()) + " users but only " +
                std::to_string(num_slots()) + " (transmitter, wavelength) slots");
    for (std::size_t u = 0; u < receivers.size(); ++u) {
        const Receiver& rx = receivers[u];
        const std::string where = "users[" + std::to_string(u) + "]";
        require(rx.area_m2 > 0.0, where + ": receiver area_m2 must be > 0");
        require(rx.fov_deg > 0.0 && rx.fov_deg <= 90.0,
                where + ": receiver fov_deg must satisfy 0 < fov <= 90");
        require(rx.responsivity_A_per_W > 0.0, where + ": receiver responsivity must be > 0");
        require(rx.orientation.norm() > 0.0, where + ": receiver orientation must be non-zero");
    }
    if (placement) {
        if (placement->count != receivers.size())
            throw validation_error("users.count does not match the resolved receiver list");
        if (!(placement->plane_height >= 0.0 && placement->plane_height <= room.height))
            throw validation_error("users.plane_height_m must lie within [0, room.height]");
    }

    require(noise.bandwidth_hz > 0.0, "noise.bandwidth_hz must be > 0");
    require(noise.thermal_psd_A2_per_Hz >= 0.0, "noise.thermal_psd_a2_per_hz must be >= 0");

    require(reward.penalty_weight >= 0.0, "reward.penalty_weight must be >= 0");
    require(std::isfinite(reward.qos_threshold_sinr_db) &&
                std::isfinite(reward.qos_threshold_rate_bps_hz),
            "reward thresholds must be finite");
    require(rate_sinr_scale > 0.0, "rate_sinr_scale must be > 0");

    hyperparams.validate();
    require(search.enumeration_budget > 0, "search.enumeration_budget must be > 0");
    require(search.near_optimal_tol >= 0.0, "search.near_optimal_tol must be >= 0");
}

std::vector<Vec3> place_users(std::size_t count, std::uint64_t seed, const Room& room,
                              double plane_height) {
    Rng rng(seed);
    std::vector<Vec3> positions;
    positions.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = uniform_double(rng) * room.width;
        const double y = uniform_double(rng) * room.length;
        positions.push_back({x, y, plane_height});
    }
    return positions;
}

namespace {

Receiver make_receiver(std::size_t user_id, const Vec3& position, const ReceiverDefaults& d) {
    Receiver rx;
    rx.user_id = user_id;
    rx.position = position;
    rx.area_m2 = d.area_m2;
    rx.fov_deg = d.fov_deg;
    rx.responsivity_A_per_W = d.responsivity_A_per_W;
    rx.orientation = d.orientation;
    return rx;
}

std::string cell_kind_name(CellKind kind) {
    switch (kind) {
        case CellKind::Micro: return "micro";
        case CellKind::Pico: return "pico";
        case CellKind::Atto: return "atto";
    }
    return "pico";
}

CellKind cell_kind_from_name(const std::string& name) {
    if (name == "micro") return CellKind::Micro;
    if (name == "pico") return CellKind::Pico;
    if (name == "atto") return CellKind::Atto;
    throw validation_error("unknown cell kind '" + name + "' (expected micro|pico|atto)");
}

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw validation_error(where + " must be an [x, y, z] array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Scenario scenario_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("scenario parse error: ") + e.what());
    }

    try {
        if (j.value("schema", 0) != 1)
            throw validation_error("scenario requires \"schema\": 1");

        Scenario s;
        s.name = j.value("name", std::string("unnamed"));

        if (j.contains("room")) {
            const json& r = j["room"];
            s.room.width = r.value("width", s.room.width);
            s.room.length = r.value("length", s.room.length);
            s.room.height = r.value("height", s.room.height);
            s.room.rho_walls = r.value("rho_walls", s.room.rho_walls);
            s.room.rho_ceiling = r.value("rho_ceiling", s.room.rho_ceiling);
            s.room.rho_floor = r.value("rho_floor", s.room.rho_floor);
            s.room.grid_first = r.value("grid_first_m", s.room.grid_first);
            s.room.grid_second = r.value("grid_second_m", s.room.grid_second);
        }

        if (j.contains("wavelengths"))
            s.wavelengths = j["wavelengths"].get<std::vector<std::string>>();

        if (!j.contains("transmitters") || !j["transmitters"].is_array() ||
            j["transmitters"].empty())
            throw validation_error("scenario requires a non-empty \"transmitters\" array");
        for (const json& t : j["transmitters"]) {
            Transmitter tx;
            tx.id = t.value("id", std::string("tx") + std::to_string(s.transmitters.size()));
            tx.cell_kind = cell_kind_from_name(t.value("cell", std::string("pico")));
            tx.position = vec_from_json(t.at("position"), "transmitter position");
            tx.azimuth_deg = t.value("azimuth_deg", 0.0);
            tx.elevation_deg = t.value("elevation_deg", -90.0);
            tx.semi_angle_deg = t.value("semi_angle_deg", 42.0);
            if (!t.contains("power_w") || !t["power_w"].is_object())
                throw validation_error("transmitter '" + tx.id +
                                       "' requires a \"power_w\" wavelength -> watts map");
            for (const auto& [label, watts] : t["power_w"].items())
                tx.power_per_wavelength[label] = watts.get<double>();
            tx.num_emitters = t.value("num_emitters", 1);
            s.transmitters.push_back(std::move(tx));
        }

        if (j.contains("receiver")) {
            const json& r = j["receiver"];
            s.receiver_defaults.area_m2 = r.value("area_m2", s.receiver_defaults.area_m2);
            s.receiver_defaults.fov_deg = r.value("fov_deg", s.receiver_defaults.fov_deg);
            s.receiver_defaults.responsivity_A_per_W =
                r.value("responsivity_a_per_w", s.receiver_defaults.responsivity_A_per_W);
            if (r.contains("orientation"))
                s.receiver_defaults.orientation =
                    vec_from_json(r["orientation"], "receiver orientation");
        }

        if (!j.contains("users"))
            throw validation_error("scenario requires a \"users\" object");
        const json& users = j["users"];
        if (users.contains("positions")) {
            std::size_t user_id = 0;
            for (const json& p : users["positions"])
                s.receivers.push_back(make_receiver(
                    user_id++, vec_from_json(p, "user position"), s.receiver_defaults));
        } else if (users.contains("count")) {
            UserPlacement placement;
            placement.count = users["count"].get<std::size_t>();
            placement.plane_height = users.value("plane_height_m", 1.0);
            placement.seed = users.value("seed", std::uint64_t{1});
            const auto positions =
                place_users(placement.count, placement.seed, s.room, placement.plane_height);
            for (std::size_t u = 0; u < positions.size(); ++u)
                s.receivers.push_back(make_receiver(u, positions[u], s.receiver_defaults));
            s.placement = placement;
        } else {
            throw validation_error("users must provide either \"positions\" or \"count\"");
        }

        if (j.contains("noise")) {
            const json& n = j["noise"];
            s.noise.bandwidth_hz = n.value("bandwidth_hz", s.noise.bandwidth_hz);
            s.noise.thermal_psd_A2_per_Hz =
                n.value("thermal_psd_a2_per_hz", s.noise.thermal_psd_A2_per_Hz);
            s.noise.include_shot = n.value("include_shot", s.noise.include_shot);
        }

        if (j.contains("reward")) {
            const json& r = j["reward"];
            const std::string objective = r.value("objective", std::string("sinr"));
            if (objective == "sinr")
                s.reward.objective = Objective::TotalSinr;
            else if (objective == "rate")
                s.reward.objective = Objective::TotalRate;
            else
                throw validation_error("reward.objective must be \"sinr\" or \"rate\", got '" +
                                       objective + "'");
            s.reward.qos_threshold_sinr_db =
                r.value("qos_threshold_sinr_db", s.reward.qos_threshold_sinr_db);
            s.reward.qos_threshold_rate_bps_hz =
                r.value("qos_threshold_rate_bps_hz", s.reward.qos_threshold_rate_bps_hz);
            s.reward.penalty_weight = r.value("penalty_weight", s.reward.penalty_weight);
        }
        s.rate_sinr_scale = j.value("rate_sinr_scale", 1.0);

        if (j.contains("hyperparams")) {
            const json& h = j["hyperparams"];
            Hyperparams& hp = s.hyperparams;
            hp.alpha = h.value("alpha", hp.alpha);
            hp.gamma = h.value("gamma", hp.gamma);
            hp.epsilon_start = h.value("epsilon_start", hp.epsilon_start);
            hp.epsilon_decay = h.value("epsilon_decay", hp.epsilon_decay);
            hp.epsilon_min = h.value("epsilon_min", hp.epsilon_min);
            hp.episodes = h.value("episodes", hp.episodes);
            hp.steps_per_episode = h.value("steps_per_episode", hp.steps_per_episode);
            hp.seed = h.value("seed", hp.seed);
        }

        if (j.contains("search")) {
            const json& f = j["search"];
            s.search.enumeration_budget =
                f.value("enumeration_budget", s.search.enumeration_budget);
            s.search.near_optimal_tol = f.value("near_optimal_tol", s.search.near_optimal_tol);
        }

        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw validation_error(std::string("scenario field error: ") + e.what());
    }
}

std::string scenario_to_json_string(const Scenario& s) {
    json j;
    j["schema"] = 1;
    j["name"] = s.name;
    j["room"] = {{"width", s.room.width},
                 {"length", s.room.length},
                 {"height", s.room.height},
                 {"rho_walls", s.room.rho_walls},
                 {"rho_ceiling", s.room.rho_ceiling},
                 {"rho_floor", s.room.rho_floor},
                 {"grid_first_m", s.room.grid_first},
                 {"grid_second_m", s.room.grid_second}};
    j["wavelengths"] = s.wavelengths;

    json txs = json::array();
    for (const Transmitter& tx : s.transmitters) {
        json t;
        t["id"] = tx.id;
        t["cell"] = cell_kind_name(tx.cell_kind);
        t["position"] = vec_to_json(tx.position);
        t["azimuth_deg"] = tx.azimuth_deg;
        t["elevation_deg"] = tx.elevation_deg;
        t["semi_angle_deg"] = tx.semi_angle_deg;
        json powers;
        for (const auto& [label, watts] : tx.power_per_wavelength) powers[label] = watts;
        t["power_w"] = powers;
        t["num_emitters"] = tx.num_emitters;
        txs.push_back(std::move(t));
    }
    j["transmitters"] = std::move(txs);

    if (s.placement) {
        j["users"] = {{"count", s.placement->count},
                      {"plane_height_m", s.placement->plane_height},
                      {"seed", s.placement->seed}};
    } else {
        json positions = json::array();
        for (const Receiver& rx : s.receivers) positions.push_back(vec_to_json(rx.position));
        j["users"] = {{"positions", std::move(positions)}};
    }

    j["receiver"] = {{"area_m2", s.receiver_defaults.area_m2},
                     {"fov_deg", s.receiver_defaults.fov_deg},
                     {"responsivity_a_per_w", s.receiver_defaults.responsivity_A_per_W},
                     {"orientation", vec_to_json(s.receiver_defaults.orientation)}};
    j["noise"] = {{"bandwidth_hz", s.noise.bandwidth_hz},
                  {"thermal_psd_a2_per_hz", s.noise.thermal_psd_A2_per_Hz},
                  {"include_shot", s.noise.include_shot}};
    j["reward"] = {{"objective", objective_name(s.reward.objective)},
                   {"qos_threshold_sinr_db", s.reward.qos_threshold_sinr_db},
                   {"qos_threshold_rate_bps_hz", s.reward.qos_threshold_rate_bps_hz},
                   {"penalty_weight", s.reward.penalty_weight}};
    j["rate_sinr_scale"] = s.rate_sinr_scale;
    j["hyperparams"] = {{"alpha", s.hyperparams.alpha},
                        {"gamma", s.hyperparams.gamma},
                        {"epsilon_start", s.hyperparams.epsilon_start},
                        {"epsilon_decay", s.hyperparams.epsilon_decay},
                        {"epsilon_min", s.hyperparams.epsilon_min},
                        {"episodes", s.hyperparams.episodes},
                        {"steps_per_episode", s.hyperparams.steps_per_episode},
                        {"seed", s.hyperparams.seed}};
    j["search"] = {{"enumeration_budget", s.search.enumeration_budget},
                   {"near_optimal_tol", s.search.near_optimal_tol}};
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json_string(buffer.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write scenario file '" + path + "'");
    out << scenario_to_json_string(scenario);
}

Scenario default_scenario() {
    Scenario s;
    s.name = "table1_default";
    s.room = Room{};  // 4 x 4 x 3 m, rho 0.8/0.8/0.3, grids 0.05 / 0.20 m

    const Vec3 adt_position{1.0, 1.0, 3.0};
    const std::map<std::string, double> powers{{"red", 0.8}, {"yellow", 0.5}};

    Transmitter pico;
    pico.id = "Pico";
    pico.cell_kind = CellKind::Pico;
    pico.position = adt_position;
    pico.azimuth_deg = 0.0;
    pico.elevation_deg = -90.0;
    pico.semi_angle_deg = 42.0;
    pico.power_per_wavelength = powers;
    pico.num_emitters = 6;
    s.transmitters.push_back(pico);

    const double atto_azimuths[4] = {45.0, 135.0, 225.0, 315.0};
    for (int k = 0; k < 4; ++k) {
        Transmitter atto;
        atto.id = "Atto" + std::to_string(k + 1);
        atto.cell_kind = CellKind::Atto;
        atto.position = adt_position;
        atto.azimuth_deg = atto_azimuths[k];
        atto.elevation_deg = -65.0;
        atto.semi_angle_deg = 22.0;
        atto.power_per_wavelength = powers;
        atto.num_emitters = 6;
        s.transmitters.push_back(atto);
    }

    // 1 cm^2 detector: keeps every served user's linear SINR well above the
    // noise floor so allocation quality, not absolute calibration, drives the
    // comparison.
    s.receiver_defaults.area_m2 = 1e-4;

    UserPlacement placement;
    placement.count = 8;
    placement.plane_height = 1.0;
    placement.seed = 1;
    const auto positions =
        place_users(placement.count, placement.seed, s.room, placement.plane_height);
    for (std::size_t u = 0; u < positions.size(); ++u)
        s.receivers.push_back(make_receiver(u, positions[u], s.receiver_defaults));
    s.placement = placement;

    // Rates at the weakest users sit below any meaningful floor in this
    // calibration, so the bundled rate objective carries no QoS cutoff.
    s.reward.qos_threshold_sinr_db = 0.0;
    s.reward.qos_threshold_rate_bps_hz = 0.0;

    // The 1.8M-action space needs a long exploration schedule; rewards are
    // deterministic per action, so a bandit-style table (alpha 1, gamma 0)
    // converges in one visit per pair.
    s.hyperparams.alpha = 1.0;
    s.hyperparams.gamma = 0.0;
    s.hyperparams.epsilon_start = 1.0;
    s.hyperparams.epsilon_decay = 0.999995;
    s.hyperparams.epsilon_min = 0.15;
    s.hyperparams.episodes = 200000;
    s.hyperparams.steps_per_episode = 10;
    s.hyperparams.seed = 1;

    s.validate();
    return s;
}

}  // namespace owc
