#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aqurate/device.hpp"
#include "aqurate/rng.hpp"

namespace aqurate {

struct ClockConfig {
  double f_clk = 1e9;          // system clock, Hz
  std::size_t frame_len = 1024; // system-clock cycles per frame

  void validate() const;
  double period() const { return 1.0 / f_clk; }
};

using Bitstream = std::vector<unsigned char>;

/// Asynchronous clock of one frame, as the set of Nyquist-grid cycles on
/// which a pulse occurs.
struct AClkTrace {
  std::vector<std::size_t> instants;  // strictly increasing, < frame_len
  std::size_t frame_id = 0;
  std::size_t frame_len = 0;
};

/// Ideal D-FF: Q[k] is the input latched at rising edge k.
Bitstream dff_sample(std::span<const unsigned char> bits, const ClockConfig& cfg);

/// NAND of Q with the system clock: one pulse in every cycle where Q is high.
AClkTrace nand_gate(std::span<const unsigned char> q, const ClockConfig& cfg,
                    std::size_t frame_id = 0);

/// One frame of oscillator output sampled at the system clock.
Bitstream oscillator_bits(double v_sr, const ClockConfig& cfg, StochasticOscillator& osc,
                          Rng& rng);

/// Oscillator -> D-FF -> NAND for one frame, using a persistent oscillator.
AClkTrace generate_aclk(double v_sr, const ClockConfig& cfg, StochasticOscillator& osc,
                        Rng& rng, std::size_t frame_id = 0);

/// Same as above with a freshly initialized oscillator.
AClkTrace generate_aclk(double v_sr, const ClockConfig& cfg, const DeviceParams& dev, Rng& rng,
                        std::size_t frame_id = 0);

}  // namespace aqurate
