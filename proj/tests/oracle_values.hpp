#pragma once

// Frozen reference values produced by oracle/generate.py (mpmath, scipy,
// numpy). Do not edit by hand; regenerate and paste.

#include <array>
#include <complex>

namespace oracle {

using C = std::complex<double>;

struct RealPoint {
  double x, value;
};

inline constexpr RealPoint kRSemicircle[] = {
    {1.7, -0.92056382803105446}, {2.0, -0.63397459621556135},  {3.0, -0.36254139118231258},
    {5.0, -0.2056382803105437},  {12.0, -0.083722749936496058},
};

struct ComplexPoint {
  C z, value;
};

inline const ComplexPoint kRComplex[] = {
    {{0.5, 0.3}, {-0.30406986348005326, 0.96455079095713198}},
    {{-1.2, 0.05}, {0.8594592708318683, 0.79499612655043859}},
    {{2.0, 1.0}, {-0.39426518018026686, 0.26742296600862009}},
};

inline constexpr RealPoint kSemicircleCdf[] = {
    {-1.5, 0.013778231855719421}, {-0.7, 0.23571047286740316}, {0.0, 0.5},
    {0.4, 0.65436562227667087},   {1.2, 0.92139084571535914},  {1.6, 0.99828152724971916},
};

struct FixedPoint {
  C z;
  double tau;
  C a, b, q;
};

inline const FixedPoint kFixedPoints[] = {
    {{3.0, 0.0}, -0.5, {-0.12061485170000749, 0.0}, {-0.118191173660778, 0.0}, {-0.35699719902156349, 0.0}},
    {{2.2, 0.0}, -0.3, {-0.17905524404351388, 0.0}, {-0.16918857609016223, 0.0}, {-0.51743239622383833, 0.0}},
    {{1.0, 0.5}, -0.5, {-0.16153148422752768, 0.24765126631631047}, {-0.19205199460920983, 0.22212909519972435},
     {-0.54563547344594734, 0.69190945671575917}},
    {{0.3, 0.2}, -1.5, {-0.099271128847893718, 0.37753084482078631}, {-0.041424585106007805, 0.31291530163319959},
     {-0.18212029905990933, 1.0033614480871855}},
    {{4.0, 0.0}, -1.8, {-0.087206148304031354, 0.0}, {-0.088819768927209657, 0.0}, {-0.26484568615845067, 0.0}},
};

/// Largest double root of the cubic in b, i.e. the right end of the support.
inline constexpr RealPoint kSupportEdge[] = {
    {-1.0, 1.6329931618554521},  {-0.8, 1.5797336162017979}, {-0.5, 1.5047209637225997},
    {-0.25, 1.4470573802461679}, {-1.5, 1.7747739190611088},
};

struct First {
  std::array<double, 3> model;
  double lambda1, rho11, rho12;
};

inline constexpr First kFirst[] = {
    {{10, 8, 0.6}, 13.034928561993953, 0.9364180418620324, 0.8402966521338476},
    {{20, 15, 0.8}, 30.03002626342217, 0.9659381578876549, 0.9275845894532507},
    {{6, 5, 0.5}, 7.298565791782127, 0.9270539877053879, 0.7807236877851116},
    {{12, 5, 0.5}, 12.862503530333024, 0.99145922085679, 0.6017158009559965},
};

struct Second {
  std::array<double, 3> model;
  double gamma;
  std::array<double, 7> x;  // lambda2, theta21, theta22, rho21, rho22, kappa, eta
};

inline constexpr Second kSecond[] = {
    {{10, 8, 0.6}, 1.0, {3.7009021799417505, -0.3423906160168281, 0.5337452504285165, 0.3501492254167314,
                         0.9478072017773971, 0.0, 0.6488460610257857}},
    {{10, 8, 0.6}, 0.8, {3.997018383030592, 0.06022942059073582, 0.8254885394777149, 0.41455089546755436,
                         0.9679895468345707, 0.3998188903558186, 0.701119139779729}},
    {{12, 5, 0.5}, 1.0, {3.845627728317412, -0.12005013533439846, 0.7883576069098781, 0.3780483221742815,
                         0.979077341828911, 0.0, 0.48646579753717634}},
    {{12, 5, 0.5}, 0.8, {3.9652678325716813, 0.14147796230941695, 0.9177134137583337, 0.42713680314940855,
                         0.9860422277013198, 0.2596999990358661, 0.5326492579789548}},
};

/// numpy eigvalsh of A_ij = 1/(1+|i-j|) + cos(i j)/(i+j+1), n = 12.
inline constexpr double kEigenvalues12[] = {
    0.07932228315146446, 0.25219054685677944, 0.3694301342937766, 0.407128918836904,
    0.5050959479660047,  0.6607703437632968,  0.7107252506327033, 0.9406553869623154,
    1.135330038375984,   1.4461271470917736,  2.210701928744361,  4.298507160821086,
};

}  // namespace oracle
