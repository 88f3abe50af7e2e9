#include "qpfi/io.hpp"
#include "qpfi/verify.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace qpfi;
namespace gen = qpfi::verify::gen;

namespace {

std::string data(const std::string& name) { return std::string(QPFI_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Io, MatrixRoundTrip) {
    gen::Rng rng(71);
    CMat m = gen::complex_gaussian(rng, 3, 3);
    CMat back = io::matrix_from_json(io::json::parse(io::matrix_to_json(m).dump()));
    EXPECT_EQ(linalg::max_abs(CMat(back - m)), 0.0);
}

TEST(Io, MatrixValidation) {
    EXPECT_THROW(io::matrix_from_json(io::json::parse(R"({"im": [[0]]})")), io::InputError);
    EXPECT_THROW(io::matrix_from_json(io::json::parse(R"({"re": [[1, 0]]})")), io::InputError);
    EXPECT_THROW(io::matrix_from_json(io::json::parse(R"({"re": [[1, 0], [0]]})")), io::InputError);
    EXPECT_THROW(io::matrix_from_json(io::json::parse(R"({"re": [[1]], "dim": 2})")), io::InputError);
    EXPECT_THROW(io::matrix_from_json(io::json::parse(R"({"re": [["a"]]})")), io::InputError);
    CMat ok = io::matrix_from_json(io::json::parse(R"({"re": [[1, 0], [0, 0]]})"));
    EXPECT_EQ(ok(0, 0), cplx(1.0));
}

TEST(Io, FamilyRoundTrip) {
    gen::Rng rng(72);
    StateFamily pure = gen::pure_family(rng, 3);
    StateFamily back = io::family_from_json(io::family_to_json(pure));
    ASSERT_TRUE(back.pure_vector().has_value());
    EXPECT_LT((back.pure_vector()->dpsi - pure.pure_vector()->dpsi).norm(), 1e-15);

    StateFamily mixed = gen::unitary_mixed_family(gen::hermitian(rng, 2), gen::full_rank_state(rng, 2));
    StateFamily mb = io::family_from_json(io::family_to_json(mixed));
    EXPECT_LT(linalg::max_abs(CMat(mb.drho().matrix() - mixed.drho().matrix())), 1e-15);
    EXPECT_THROW(io::family_from_json(io::json::parse(R"({"psi": {"re": [1, 0]}})")), io::InputError);
}

TEST(Io, PovmAndInstanceRoundTrip) {
    gen::Rng rng(73);
    Povm p = gen::general_povm(rng, 3, 2);
    Povm pb = io::povm_from_json(io::povm_to_json(p));
    EXPECT_EQ(pb.outcomes(), 3);
    EXPECT_LT(linalg::max_abs(CMat(pb.effect(2).matrix() - p.effect(2).matrix())), 1e-15);

    ClassicalInstance inst = verify::gap_instance();
    ClassicalInstance ib = io::instance_from_json(io::instance_to_json(inst));
    EXPECT_EQ(ib.lambda(), inst.lambda());
    EXPECT_EQ(ib.m(), inst.m());
    EXPECT_THROW(io::instance_from_json(io::json::parse(R"({"lambda": [1], "m": [[1]]})")), io::InputError);
}

TEST(Io, GammaPairIsOneBased) {
    io::json j = io::to_json(gamma_binary_qudit((RVec(3) << 0.9, 0.5, 0.2).finished()));
    EXPECT_EQ(j["pair"], io::json::array({1, 3}));
    EXPECT_NEAR(j["gamma"].get<double>(), 0.5, 1e-14);
    io::json k = io::to_json(gamma_binary_qubit(0.7, 0.0));
    EXPECT_TRUE(k["p_star"].is_null());
    EXPECT_FALSE(k["attainable"].get<bool>());
}

TEST(Io, ErrorPayload) {
    try {
        gamma_binary_qubit(0.5, 0.5);
        FAIL();
    } catch (const Error& e) {
        io::json j = io::error_to_json(e);
        EXPECT_EQ(j["error"], "TrivialMeasurement");
        EXPECT_FALSE(j["invariant"].get<std::string>().empty());
    }
}

TEST(Io, ReadFileErrors) {
    EXPECT_THROW(io::read_file(data("no_such_file.json")), io::InputError);
    auto tmp = std::filesystem::temp_directory_path() / "qpfi_bad.json";
    std::ofstream(tmp) << "{ not json";
    EXPECT_THROW(io::read_file(tmp.string()), io::InputError);
    std::filesystem::remove(tmp);
}

TEST(Io, ShippedDataParses) {
    EXPECT_NEAR(qpfi_classical_exhaustive(io::instance_from_json(io::read_file(data("gap_instance.json")))).value, 4.0,
                1e-9);
    EXPECT_NEAR(qupfi_classical_permutation_bound(io::instance_from_json(io::read_file(data("gap_instance_quarter.json"))))
                    .value,
                2.4, 1e-12);
    StateFamily phase = io::family_from_json(io::read_file(data("phase_qubit.json")));
    EXPECT_NEAR(qfi(phase), 4.0, 1e-12);
    EXPECT_NEAR(fi(phase, io::povm_from_json(io::read_file(data("y_basis.json")))).value, 4.0, 1e-12);
    EXPECT_NEAR(qupfi_pure(phase, io::povm_from_json(io::read_file(data("noisy_z.json")))), 2.56, 1e-12);
    StateFamily gap = io::family_from_json(io::read_file(data("gap_state.json")));
    Sandwich s = sandwich(gap, io::povm_from_json(io::read_file(data("gap_povm.json"))));
    EXPECT_NEAR(s.lower, 4.0, 1e-10);
    EXPECT_NEAR(s.upper, 4.0, 1e-10);
    EXPECT_NO_THROW(io::family_from_json(io::read_file(data("mixed_qubit.json"))));
    EXPECT_NO_THROW(io::family_from_json(io::read_file(data("noon_n2.json"))));
    EXPECT_NO_THROW(io::povm_from_json(io::read_file(data("photodetector_n2.json"))));
    EXPECT_NO_THROW(io::povm_from_json(io::read_file(data("singular_binary.json"))));
    try {
        io::povm_from_json(io::read_file(data("not_psd_povm.json")));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
    }
}
