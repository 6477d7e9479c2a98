#include "falc/instance_io.hpp"

#include <fstream>
#include <string>

#include "falc/matrix_io.hpp"
#include "json.hpp"

namespace falc {

void write_instance(const std::filesystem::path& dir, const Instance& inst) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw MatrixFormatError("cannot create " + dir.string() + ": " + ec.message());
    save_matrix(dir / "D.fmat", inst.d);
    save_matrix(dir / "X0.fmat", inst.truth.x0);
    save_matrix(dir / "S0.fmat", inst.truth.s0);
    save_matrix(dir / "Y0.fmat", inst.truth.y0);

    nlohmann::json meta;
    meta["n"] = inst.d.rows();
    meta["r"] = inst.truth.rank_true;
    meta["support_size"] = inst.truth.support.size();
    meta["rho_noise"] = inst.rho_noise;
    meta["seed"] = inst.seed;
    meta["support"] = inst.truth.support;
    std::ofstream out(dir / "meta.json");
    if (!out) throw MatrixFormatError("cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << '\n';
}

Instance read_instance(const std::filesystem::path& dir) {
    Instance inst;
    inst.d = load_matrix(dir / "D.fmat");
    inst.truth.x0 = load_matrix(dir / "X0.fmat");
    inst.truth.s0 = load_matrix(dir / "S0.fmat");
    inst.truth.y0 = load_matrix(dir / "Y0.fmat");
    std::ifstream in(dir / "meta.json");
    if (!in) throw MatrixFormatError("missing " + (dir / "meta.json").string());
    nlohmann::json meta;
    try {
        in >> meta;
        inst.truth.rank_true = meta.at("r").get<std::size_t>();
        inst.rho_noise = meta.at("rho_noise").get<double>();
        inst.seed = meta.at("seed").get<std::uint64_t>();
        inst.truth.support = meta.at("support").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw MatrixFormatError("meta.json: " + std::string(e.what()));
    }
    const auto& d = inst.d;
    for (const DenseMatrix* m : {&inst.truth.x0, &inst.truth.s0, &inst.truth.y0}) {
        if (m->rows() != d.rows() || m->cols() != d.cols())
            throw MatrixFormatError("instance matrices have inconsistent shapes");
    }
    return inst;
}

}  // namespace falc
