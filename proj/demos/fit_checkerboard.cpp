// Fits a 32x32 checkerboard with a small SL2A network and prints PSNR as it trains.
#include <iostream>

#include "sl2a/sl2a.hpp"

int main()
{
    sl2a::retain_freed_memory();
    const sl2a::TaskInstance task = sl2a::make_image_task(sl2a::builtin::checkerboard(32, 4));

    sl2a::ModelSpec spec;
    spec.output_dim = 1;
    spec.width = 64;
    spec.degree = 64;
    sl2a::Network net = sl2a::build(spec);

    sl2a::TrainConfig cfg;
    cfg.epochs = 200;
    cfg.log_every = 20;
    const auto report = sl2a::fit(net, task, cfg, [](const sl2a::EpochRecord& r, const sl2a::Matrix&) {
        std::cout << "epoch " << r.epoch << "  loss " << r.loss << "  psnr " << r.metric << " dB\n";
    });
    std::cout << net.count_params() << " parameters, best psnr " << report.best_metric << " dB at epoch "
              << report.best_epoch << "\n";
}
