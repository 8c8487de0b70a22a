// Plants three factors in a noisy order-3 tensor and recovers them.

#include "orthotensor/orthotensor.hpp"

#include <fmt/format.h>

int main()
{
    using namespace orthotensor;

    const auto inst = gen_instance(/*d=*/10, /*k=*/3, /*r=*/3, {NoiseModel::gaussian, 1e-3, 5},
                                   FactorMode::random_orthonormal, /*seed=*/7);
    const auto dec = decompose(inst.tensor, 3);
    const auto match = match_and_score(dec.factors, inst.truth);

    for (std::size_t i = 0; i < dec.factors.size(); ++i) {
        const auto& f = dec.factors[i];
        fmt::print("factor {}: lambda_hat = {:.6f}  objective = {:.6f}  loss = {:.2e}\n", f.iteration,
                   f.lambda_hat, f.objective, match.per_factor_loss[i]);
    }
    fmt::print("noise spectral norm >= {:.3e}, average loss {:.3e}\n", inst.noise_spectral_lb, match.avg_loss);
}
