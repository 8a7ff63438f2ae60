#pragma once

// Generated by tests/oracle/derive_values.py (mpmath, 40 digits).

namespace oracle {

inline constexpr double L_3_2 = 0.1875;
inline constexpr double L_1_2 = 0.25;
inline constexpr double L_1 = 0.21220659078919378103;
inline constexpr double J0_1 = 2.4048255576957727686;
inline constexpr double J0_2 = 5.5200781102863106496;
inline constexpr double J1_1 = 3.8317059702075123156;
inline constexpr double J2_1 = 5.1356223018406825563;
inline constexpr double J1_2 = 7.0155866698156187535;
inline constexpr double J3_2_1 = 4.4934094579090641753;
inline constexpr double thin_tail_integral = 1.5794965318894370392;
inline constexpr double thin_bound = 3.9673111994585388897;
inline constexpr double thin_tail_integral_printed_limit = 1.2392764564804835009;
inline constexpr double gauss_bound_v1 = 0.0;
inline constexpr double gauss_bound_v6 = 4.3849997988310590071;
inline constexpr double nd_verbatim = 23.035342045943539807;
inline constexpr double nd_weighted = 26.659642950727051683;
inline constexpr double twist_bound = 4.1619201664534953626;
inline constexpr double omega_prime_area = 10.995574287564276335;
inline constexpr double omega_prime_vol_printed = 5.4977871437821381673;
inline constexpr double cusp_rhs_example = 0.5303300858899106433;
inline constexpr double phase_rhs_example = 1.6660811018093873426;
inline constexpr double wminus_bump = 0.060633986857539448565;
inline constexpr double wfull_bump = -0.026621068667541109946;

}  // namespace oracle
