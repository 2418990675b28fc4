#include "aqurate/clockgen.hpp"

#include <stdexcept>
#include <string>

namespace aqurate {

void ClockConfig::validate() const {
  if (!(f_clk > 0.0)) throw std::invalid_argument("clock: f_clk must be positive");
  if (frame_len == 0) throw std::invalid_argument("clock: frame_len must be positive");
}

Bitstream dff_sample(std::span<const unsigned char> bits, const ClockConfig& cfg) {
  if (bits.size() != cfg.frame_len)
    throw std::invalid_argument("dff_sample: expected " + std::to_string(cfg.frame_len) +
                                " bits, got " + std::to_string(bits.size()));
  Bitstream q(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) q[k] = bits[k] ? 1 : 0;
  return q;
}

AClkTrace nand_gate(std::span<const unsigned char> q, const ClockConfig& cfg,
                    std::size_t frame_id) {
  if (q.size() != cfg.frame_len)
    throw std::invalid_argument("nand_gate: Q length does not match frame_len");
  AClkTrace trace;
  trace.frame_id = frame_id;
  trace.frame_len = cfg.frame_len;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (q[k]) trace.instants.push_back(k);
  return trace;
}

Bitstream oscillator_bits(double v_sr, const ClockConfig& cfg, StochasticOscillator& osc,
                          Rng& rng) {
  cfg.validate();
  Bitstream bits(cfg.frame_len);
  const double dt = cfg.period();
  for (auto& b : bits) b = osc.step(v_sr, dt, rng) ? 1 : 0;
  return bits;
}

AClkTrace generate_aclk(double v_sr, const ClockConfig& cfg, StochasticOscillator& osc, Rng& rng,
                        std::size_t frame_id) {
  const Bitstream bits = oscillator_bits(v_sr, cfg, osc, rng);
  return nand_gate(dff_sample(bits, cfg), cfg, frame_id);
}

AClkTrace generate_aclk(double v_sr, const ClockConfig& cfg, const DeviceParams& dev, Rng& rng,
                        std::size_t frame_id) {
  StochasticOscillator osc(dev, rng);
  return generate_aclk(v_sr, cfg, osc, rng, frame_id);
}

}  // namespace aqurate
