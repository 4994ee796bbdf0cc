#pragma once

// Severity constants for the 15 corruptions, index 0 = severity 1. Values
// follow the published ImageNet-C constants. Where those are expressed in
// pixels of a 224/244-pixel image (elastic), they are given here as fractions
// of the shorter image side. frost and snow are procedural (see corruptions.cpp).

#include <array>

namespace cafda::corruption_constants {

inline constexpr std::array<double, 5> kGaussianSigma = {0.08, 0.12, 0.18, 0.26, 0.38};
inline constexpr std::array<double, 5> kShotPhotons = {60, 25, 12, 5, 3};
inline constexpr std::array<double, 5> kImpulseAmount = {0.03, 0.06, 0.09, 0.17, 0.27};

struct Defocus {
  int radius;
  double alias_sigma;
};
inline constexpr std::array<Defocus, 5> kDefocus = {{{3, 0.1}, {4, 0.5}, {6, 0.5}, {8, 0.5}, {10, 0.5}}};

struct Glass {
  double sigma;
  int max_delta;
  int iterations;
};
inline constexpr std::array<Glass, 5> kGlass = {
    {{0.7, 1, 2}, {0.9, 2, 1}, {1.0, 2, 3}, {1.1, 3, 2}, {1.5, 4, 2}}};

struct Motion {
  int radius;
  double sigma;
};
inline constexpr std::array<Motion, 5> kMotion = {{{10, 3}, {15, 5}, {15, 8}, {15, 12}, {20, 15}}};
inline constexpr double kMotionAngleMaxDegrees = 45.0;

/// Zoom factors start, start + step, ... while < stop.
struct ZoomRange {
  double stop;
  double step;
};
inline constexpr std::array<ZoomRange, 5> kZoom = {
    {{1.11, 0.01}, {1.16, 0.01}, {1.21, 0.02}, {1.26, 0.02}, {1.31, 0.03}}};

struct Snow {
  double mean;       ///< snow layer normal mean
  double stddev;     ///< snow layer normal stddev
  double zoom;       ///< layer zoom factor
  double threshold;  ///< layer values below this are cleared
  int blur_radius;   ///< streak length
  double blur_sigma;
  double blend;      ///< weight of the original image against its whitened copy
};
inline constexpr std::array<Snow, 5> kSnow = {{{0.1, 0.3, 3.0, 0.5, 10, 4, 0.8},
                                               {0.2, 0.3, 2.0, 0.5, 12, 4, 0.7},
                                               {0.55, 0.3, 4.0, 0.9, 12, 8, 0.7},
                                               {0.55, 0.3, 4.5, 0.85, 12, 8, 0.65},
                                               {0.55, 0.3, 2.5, 0.85, 12, 12, 0.55}}};

struct Frost {
  double image_weight;
  double frost_weight;
};
inline constexpr std::array<Frost, 5> kFrost = {{{1.0, 0.4}, {0.8, 0.6}, {0.7, 0.7}, {0.65, 0.7}, {0.6, 0.75}}};

struct Fog {
  double strength;
  double wibble_decay;
};
inline constexpr std::array<Fog, 5> kFog = {{{1.5, 2.0}, {2.0, 2.0}, {2.5, 1.7}, {2.5, 1.5}, {3.0, 1.4}}};

inline constexpr std::array<double, 5> kBrightnessDelta = {0.1, 0.2, 0.3, 0.4, 0.5};
inline constexpr std::array<double, 5> kContrastFactor = {0.4, 0.3, 0.2, 0.1, 0.05};

/// (alpha, sigma, affine jitter), each a fraction of the shorter side.
struct Elastic {
  double alpha;
  double sigma;
  double affine;
};
inline constexpr std::array<Elastic, 5> kElastic = {{{2.0, 0.7, 0.1},
                                                     {2.0, 0.08, 0.2},
                                                     {0.05, 0.01, 0.02},
                                                     {0.07, 0.01, 0.02},
                                                     {0.12, 0.01, 0.02}}};

inline constexpr std::array<double, 5> kPixelateFactor = {0.6, 0.5, 0.4, 0.3, 0.25};
inline constexpr std::array<int, 5> kJpegQuality = {25, 18, 15, 10, 7};

}  // namespace cafda::corruption_constants
