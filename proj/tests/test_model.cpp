#include "hlds/error.hpp"
#include "hlds/frames.hpp"
#include "hlds/model.hpp"
#include "hlds/synth.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace hlds;
using namespace hlds::model;

namespace {

HldsConfig dims_config(std::vector<int> dims, std::optional<double> c = std::nullopt) {
    HldsConfig cfg;
    cfg.layer_dims = std::move(dims);
    cfg.window_len = cfg.layer_dims.front();
    cfg.overlap = cfg.window_len / 2;
    cfg.innovation_scale = c;
    return cfg;
}

// Independent entry-wise description of the joint transition: layer index of
// each joint row (top layer first) and position within the layer.
struct Place {
    std::size_t layer; // bottom-first index
    int index;
};

std::vector<Place> places(const std::vector<int>& dims) {
    std::vector<Place> out;
    for (std::size_t l = dims.size(); l-- > 0;) {
        for (int i = 0; i < dims[l]; ++i) {
            out.push_back({l, i});
        }
    }
    return out;
}

double expected_entry(const std::vector<int>& dims, const Place& r, const Place& c) {
    const bool top = r.layer + 1 == dims.size();
    if (r.layer == c.layer) {
        return r.index == c.index ? (top ? 1.0 : -1.0) : 0.0;
    }
    if (!top && c.layer == r.layer + 1) {
        const int n = dims[r.layer];
        const int s = dims[c.layer];
        return (r.index / (n / s) == c.index) ? 2.0 * s / n : 0.0;
    }
    return 0.0;
}

} // namespace

TEST_CASE("coupling examples") {
    Matrix b42(4, 2);
    b42 << 1, 0, 1, 0, 0, 1, 0, 1;
    CHECK(build_coupling(4, 2) == b42);
    Matrix b22(2, 2);
    b22 << 2, 0, 0, 2;
    CHECK(build_coupling(2, 2) == b22);
    const Matrix b = build_coupling(96, 24);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            if (b(i, j) != 0.0) {
                CHECK(b(i, j) == 0.5);
                ++nonzero;
            }
        }
    }
    CHECK(nonzero == 96);
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        CHECK(b.col(j).sum() == doctest::Approx(2.0));
    }
    CHECK_THROWS_AS(build_coupling(10, 4), ConfigError);
}

TEST_CASE("two-layer hand assembly") {
    const JointModel jm = build_joint_model(dims_config({2, 1}, 1.0));
    CHECK(jm.state_dim() == 3);
    CHECK(jm.innovation_variances == std::vector<double>{2.0, 1.0});
    CHECK(jm.obs_noise_variance == 2.0);
    Matrix f(3, 3);
    f << 1, 0, 0, 1, -1, 0, 1, 0, -1;
    CHECK(jm.dense.transition == f);
    Matrix h(2, 3);
    h << 0, 1, 0, 0, 0, 1;
    CHECK(jm.dense.observation == h);
    CHECK(jm.dense.state_noise_cov.diagonal() == Vector{{1.0, 2.0, 2.0}});
}

TEST_CASE("joint transition matches the entry-wise definition for several configs") {
    for (const auto& dims : std::vector<std::vector<int>>{{96, 24, 12, 2}, {2, 1}, {8, 4, 2}, {12, 6, 3, 1}, {30, 6}}) {
        const JointModel jm = build_joint_model(dims_config(dims));
        const auto p = places(dims);
        REQUIRE(static_cast<Eigen::Index>(p.size()) == jm.state_dim());
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                REQUIRE(jm.dense.transition(i, j) == expected_entry(dims, p[i], p[j]));
            }
        }
        // sparse row description agrees with the dense matrix
        for (Eigen::Index i = 0; i < jm.state_dim(); ++i) {
            const auto& row = jm.rows[static_cast<std::size_t>(i)];
            CHECK(jm.dense.transition(i, i) == row.diagonal);
            if (row.parent >= 0) {
                CHECK(jm.dense.transition(i, row.parent) == row.coupling);
            }
        }
        // innovation variances strictly decrease going up
        for (std::size_t l = 1; l < dims.size(); ++l) {
            CHECK(jm.innovation_variances[l] < jm.innovation_variances[l - 1]);
        }
    }
}

TEST_CASE("default model shape and couplings") {
    const JointModel jm = build_joint_model(HldsConfig{});
    CHECK(jm.state_dim() == 134);
    CHECK(jm.obs_dim() == 96);
    CHECK(jm.top().dim == 2);
    CHECK(jm.top().offset == 0);
    CHECK(jm.bottom().offset == 38);
    CHECK(jm.obs_noise_variance == doctest::Approx(1.0));
    CHECK(jm.innovation_variances.front() == doctest::Approx(1.0));
    std::set<double> couplings;
    for (const auto& r : jm.rows) {
        if (r.parent >= 0) {
            couplings.insert(r.coupling);
        }
    }
    CHECK(couplings == std::set<double>{0.5, 1.0, 2.0 / 6.0});
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(build_joint_model(dims_config({4, 2, 2})), ConfigError);
    CHECK_THROWS_AS(build_joint_model(dims_config({4})), ConfigError);
    CHECK_THROWS_AS(build_joint_model(dims_config({10, 4})), ConfigError);
    HldsConfig cfg;
    cfg.overlap = 96;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = HldsConfig{};
    cfg.window_len = 64;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = HldsConfig{};
    cfg.obs_noise_override = 0.25;
    CHECK(build_joint_model(cfg).obs_noise_variance == 0.25);
}

TEST_CASE("initial state") {
    const JointModel jm = build_joint_model(dims_config({2, 1}));
    const double y0[] = {3.0, 4.0};
    const auto s = initial_state(jm, y0, 1.0);
    CHECK(s.estimate == Vector{{0.0, 3.0, 4.0}});
    CHECK(s.covariance == Matrix::Identity(3, 3));
    const JointModel big = build_joint_model(HldsConfig{});
    const std::vector<double> zeros(96, 0.0);
    const auto s2 = initial_state(big, zeros, 2.0);
    CHECK(s2.estimate.isZero(0.0));
    CHECK(s2.covariance == 2.0 * Matrix::Identity(134, 134));
}

TEST_CASE("structured step matches the dense Kalman step") {
    std::mt19937_64 rng(41);
    for (const auto& dims : std::vector<std::vector<int>>{{2, 1}, {8, 4, 2}, {96, 24, 12, 2}}) {
        const JointModel jm = build_joint_model(dims_config(dims));
        const Eigen::Index m = jm.obs_dim();
        RowMatrix obs(40, m);
        for (Eigen::Index t = 0; t < obs.rows(); ++t) {
            obs.row(t) = test::random_vector(rng, m).cwiseAbs().transpose();
        }
        statespace::FilterState a = initial_state(jm, {obs.data(), static_cast<std::size_t>(m)}, 1.0);
        statespace::FilterState b = a;
        for (Eigen::Index t = 1; t < obs.rows(); ++t) {
            const std::span<const double> y(obs.data() + t * m, static_cast<std::size_t>(m));
            a = statespace::kalman_step(a, y, jm.dense);
            b = structured_step(b, y, jm);
            REQUIRE(test::rel_diff(a.estimate, b.estimate) < 1e-11);
            REQUIRE((a.covariance - b.covariance).norm() <= 1e-11 * a.covariance.norm());
            REQUIRE(b.covariance == b.covariance.transpose());
        }
    }
}

TEST_CASE("run_filter shape, paths and visitor") {
    const JointModel jm = build_joint_model(HldsConfig{});
    std::mt19937_64 rng(43);
    RowMatrix obs(1000, 96);
    for (Eigen::Index t = 0; t < obs.rows(); ++t) {
        obs.row(t) = test::random_vector(rng, 96).cwiseAbs().transpose();
    }
    const FilterRun run = run_filter(jm, obs, 1.0);
    CHECK(run.frames() == 1000);
    CHECK(run.estimates.cols() == 134);
    const ZTrajectory z = extract_z(run, jm);
    CHECK(z.dim() == 2);
    CHECK(z.at(0)[0] == 0.0);
    CHECK(z.at(0)[1] == 0.0);
    for (Eigen::Index t : {Eigen::Index{1}, Eigen::Index{500}, Eigen::Index{999}}) {
        CHECK(z.z(t, 0) == run.estimates(t, jm.top().offset));
        CHECK(z.z(t, 1) == run.estimates(t, jm.top().offset + 1));
    }

    const RowMatrix head = obs.topRows(60);
    std::size_t visited = 0;
    const FilterRun s = run_filter(jm, head, 1.0, [&](std::size_t, const statespace::FilterState&) { ++visited; });
    const FilterRun d = run_filter(jm, head, 1.0, {}, StepPath::dense);
    CHECK(visited == 60);
    for (Eigen::Index t = 0; t < head.rows(); ++t) {
        REQUIRE(test::rel_diff(s.estimates.row(t).transpose(), d.estimates.row(t).transpose()) < 1e-10);
    }
}

TEST_CASE("single observation returns the initial state") {
    const JointModel jm = build_joint_model(dims_config({8, 4, 2}));
    RowMatrix obs = RowMatrix::Constant(1, 8, 0.5);
    const FilterRun run = run_filter(jm, obs, 1.0);
    const auto init = initial_state(jm, {obs.data(), 8}, 1.0);
    CHECK(run.estimates.row(0).transpose() == init.estimate);
    CHECK(run.final_covariance == init.covariance);
    CHECK_THROWS_AS(run_filter(jm, RowMatrix(0, 8), 1.0), ContractError);
    CHECK_THROWS_AS(run_filter(jm, RowMatrix::Zero(3, 7), 1.0), ContractError);
}

TEST_CASE("non-finite frame errors carry the frame index") {
    const JointModel jm = build_joint_model(dims_config({8, 4, 2}));
    RowMatrix obs = RowMatrix::Constant(10, 8, 0.5);
    obs(7, 3) = std::nan("");
    try {
        (void)run_filter(jm, obs, 1.0);
        FAIL("expected ContractError");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).rfind("frame 7: ", 0) == 0);
    }
}

TEST_CASE("constant input: top layer converges") {
    // The slowest closed-loop mode of the default model has modulus ~0.982, so
    // unit-scale input needs ~900 frames to settle below 1e-6 per step.
    const JointModel jm = build_joint_model(HldsConfig{});
    std::mt19937_64 rng(47);
    const Vector frame = test::random_vector(rng, 96).cwiseAbs();
    RowMatrix obs(1000, 96);
    for (Eigen::Index t = 0; t < 1000; ++t) {
        obs.row(t) = frame.transpose();
    }
    const ZTrajectory z = extract_z(run_filter(jm, obs, 1.0), jm);
    for (Eigen::Index t = 901; t < 1000; ++t) {
        REQUIRE((z.z.row(t) - z.z.row(t - 1)).norm() < 1e-6);
    }
}

TEST_CASE("scale equivariance") {
    const JointModel jm = build_joint_model(dims_config({8, 4, 2}));
    std::mt19937_64 rng(53);
    RowMatrix obs(50, 8);
    for (Eigen::Index t = 0; t < 50; ++t) {
        obs.row(t) = test::random_vector(rng, 8).transpose();
    }
    const FilterRun a = run_filter(jm, obs, 1.0);
    const FilterRun b = run_filter(jm, RowMatrix(obs * 3.5), 1.0);
    const RowMatrix diff = b.estimates - 3.5 * a.estimates;
    CHECK(diff.cwiseAbs().maxCoeff() <= 1e-11 * (1.0 + b.estimates.cwiseAbs().maxCoeff()));
}

TEST_CASE("top layer is more stationary than the bottom layer") {
    const JointModel jm = build_joint_model(HldsConfig{});
    for (double hz : {250.0, 800.0, 2630.0}) {
        for (double sigma : {0.0, 0.1}) {
            synth::ClipScript script;
            script.noise_sigma = sigma;
            script.seed = 12;
            int harmonics = 1;
            while (harmonics < 4 && hz * (harmonics + 1) < 4000.0) {
                ++harmonics;
            }
            script.events = {synth::NoteEvent{"n", synth::NoteSpec{hz, harmonics, 0.7, (48.0 * 299 + 96) / 8000, 0.3}}};
            const auto feats = frames::extract_features(synth::render(script).clip, 96, 48);
            REQUIRE(feats.count() == 300);
            const FilterRun run = run_filter(jm, feats.frames, 1.0);
            auto mean_step = [&](const LayerBlock& b) {
                double sum = 0.0;
                for (Eigen::Index t = 51; t < run.frames(); ++t) {
                    sum += (run.estimates.row(t) - run.estimates.row(t - 1)).segment(b.offset, b.dim).norm() /
                           static_cast<double>(b.dim);
                }
                return sum / static_cast<double>(run.frames() - 51);
            };
            CAPTURE(hz);
            CAPTURE(sigma);
            CHECK(mean_step(jm.top()) < mean_step(jm.bottom()));
        }
    }
}
