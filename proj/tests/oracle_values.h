#pragma once

// Reference values for the closed-form calculators, computed independently
// with a 40-digit arbitrary-precision evaluation of the same formulas and
// rounded to the nearest double. Implementations must agree to a relative
// error of 1e-12.

namespace oracle {

struct RadiusPoint {
    long long samples;
    int n_candidates;
    double delta;
    double expected;
};

// confidence_radius(n, C, delta)
inline constexpr RadiusPoint kRadiusPoints[] = {
    {1, 20, 0.1, 3.9454338205921125},
    {10, 20, 0.1, 1.4636001679577154},
    {100, 20, 0.1, 0.48684758275629313},
    {1000, 36, 0.05, 0.16645550560314908},
    {7, 36, 0.05, 1.8313170331381074},
    {50, 100, 0.01, 0.78695951902352166},
};

struct EpochBoundPoint {
    double gap;
    int batch_size;
    int n_candidates;
    double delta;
    double expected;
};

// p_l(gap, B, C, delta)
inline constexpr EpochBoundPoint kEpochBoundPoints[] = {
    {0.05, 1, 5, 0.1, 41682.956029586062},
    {0.05, 1, 100, 0.01, 59764.873803074287},
    {0.05, 10, 5, 0.01, 4956.5692997274344},
    {0.05, 10, 36, 0.1, 4844.3563685559645},
    {0.05, 10, 100, 0.01, 5976.4873803074287},
    {0.05, 50, 5, 0.01, 991.31385994548687},
    {0.05, 50, 36, 0.01, 1125.8623140293585},
    {0.05, 50, 36, 0.1, 968.87127371119291},
    {0.1, 1, 5, 0.01, 12235.233688277574},
    {0.1, 1, 100, 0.1, 12830.251328180531},
    {0.1, 10, 5, 0.1, 1025.0757027323987},
    {0.1, 10, 36, 0.01, 1392.7246762732385},
    {0.1, 50, 36, 0.01, 278.5449352546477},
    {0.2, 10, 5, 0.01, 301.55328135746445},
    {0.2, 10, 36, 0.01, 344.16338082644128},
    {0.2, 10, 36, 0.1, 294.4379953125276},
    {0.2, 50, 5, 0.01, 60.31065627149289},
    {0.2, 50, 100, 0.1, 63.308558789235573},
    {0.35, 1, 36, 0.01, 1112.1524997129281},
    {0.35, 1, 100, 0.1, 1021.3361667356228},
    {0.35, 10, 36, 0.01, 111.21524997129281},
    {0.35, 50, 5, 0.1, 16.144580862856852},
    {0.35, 50, 100, 0.1, 20.426723334712456},
    {0.5, 1, 5, 0.01, 472.00558572679073},
    {0.5, 1, 36, 0.01, 541.0326854237149},
    {0.5, 1, 36, 0.1, 460.46467551846813},
    {0.5, 1, 100, 0.01, 576.55828917392753},
    {0.5, 10, 5, 0.01, 47.200558572679073},
    {0.5, 10, 5, 0.1, 39.073717303166581},
    {0.5, 10, 36, 0.1, 46.046467551846813},
    {0.5, 50, 5, 0.01, 9.4401117145358147},
    {0.5, 50, 36, 0.01, 10.820653708474298},
    {0.5, 50, 36, 0.1, 9.2092935103693626},
    {0.5, 50, 100, 0.01, 11.531165783478551},
    {0.8, 1, 5, 0.01, 181.98479490013764},
    {0.8, 1, 5, 0.1, 149.92138295093061},
    {0.8, 1, 100, 0.01, 223.14241655150324},
    {0.8, 10, 36, 0.01, 20.916708887036641},
    {0.8, 10, 100, 0.01, 22.314241655150324},
    {0.8, 50, 36, 0.01, 4.1833417774073282},
    {0.8, 50, 100, 0.01, 4.4628483310300649},
    {0.8, 50, 100, 0.1, 3.8311609718352169},
    {0.95, 1, 5, 0.01, 128.38971032492568},
    {0.95, 1, 5, 0.1, 105.5571918317602},
    {0.95, 1, 36, 0.01, 147.73014263063577},
    {0.95, 1, 100, 0.01, 157.66925637164631},
    {0.95, 10, 36, 0.1, 12.515183445214915},
    {0.95, 50, 5, 0.01, 2.5677942064985135},
    {0.95, 50, 5, 0.1, 2.1111438366352039},
    {0.95, 50, 100, 0.1, 2.7040522207812606},
};

}  // namespace oracle
