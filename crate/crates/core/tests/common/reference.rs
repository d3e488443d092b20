// Generated by tests/oracle/reference_values.py (mpmath, 60 digits).
// Do not edit by hand.
#![allow(clippy::excessive_precision)]

/// (a, b, x, I_x(a, b))
pub const BETA_REFERENCE: [(f64, f64, f64, f64); 50] = [
    (255.5, 0.5, 0.01, 3.5456102200139087663e-513),
    (255.5, 0.5, 0.1, 1.1757144893603759075e-257),
    (255.5, 0.5, 0.5, 6.0817103754979820097e-79),
    (255.5, 0.5, 0.9, 2.234427350657575988e-13),
    (255.5, 0.5, 0.99, 0.023506203541721878835),
    (255.5, 0.5, 0.999, 0.47481189919593741803),
    (0.5, 0.5, 0.05, 0.14356629312870627075),
    (0.5, 0.5, 0.35, 0.4030133159793217095),
    (0.5, 0.5, 0.8, 0.70483276469913345165),
    (0.5, 0.5, 0.97, 0.88917531339554058016),
    (1.5, 0.5, 0.05, 0.0048182304681985508735),
    (1.5, 0.5, 0.35, 0.099365037350037575014),
    (1.5, 0.5, 0.8, 0.45018485575210091442),
    (1.5, 0.5, 0.97, 0.78057611553492967318),
    (2.5, 0.5, 0.05, 0.00019329504618162687759),
    (2.5, 0.5, 0.35, 0.028513772336537943634),
    (2.5, 0.5, 0.8, 0.31437263764701689456),
    (2.5, 0.5, 0.97, 0.71034863425173461999),
    (7.5, 0.5, 0.05, 3.620255093637653398e-11),
    (7.5, 0.5, 0.35, 0.0000928559257540055334),
    (7.5, 0.5, 0.8, 0.071879597501199901751),
    (7.5, 0.5, 0.97, 0.50617845890916898619),
    (31.5, 0.5, 0.05, 1.0687812607651467849e-42),
    (31.5, 0.5, 0.35, 5.3543247909933375821e-16),
    (31.5, 0.5, 0.8, 0.00018783841144419402699),
    (31.5, 0.5, 0.97, 0.16765359099940461568),
    (63.5, 0.5, 0.05, 1.7568705320363492533e-84),
    (63.5, 0.5, 0.35, 9.7555745225180453268e-31),
    (63.5, 0.5, 0.8, 1.0772454598803729721e-7),
    (63.5, 0.5, 0.97, 0.049652404563408914496),
    (127.5, 0.5, 0.05, 6.7292869617961401309e-168),
    (127.5, 0.5, 0.35, 4.5662314286287899267e-60),
    (127.5, 0.5, 0.8, 4.84379638100595477e-14),
    (127.5, 0.5, 0.97, 0.0053655410710840982724),
    (300.0, 0.5, 0.05, 1.6397778561408985568e-392),
    (300.0, 0.5, 0.35, 6.7027421380848245532e-139),
    (300.0, 0.5, 0.8, 6.1139961676226581685e-31),
    (300.0, 0.5, 0.97, 0.000019267719437037450407),
    (1.0, 1.0, 0.3, 0.3),
    (2.0, 3.0, 0.4, 0.5248),
    (5.0, 2.0, 0.7, 0.420175),
    (0.5, 2.5, 0.2, 0.68562736235298310544),
    (10.0, 10.0, 0.5, 0.5),
    (12.5, 4.0, 0.9, 0.93819529476256743074),
    (3.0, 0.5, 0.999, 0.94074681048405376664),
    (255.5, 0.5, 0.95, 3.1016687987574533394e-7),
    (255.5, 0.5, 0.995, 0.10967453241230586779),
    (100.0, 0.5, 0.999999, 0.98873067608717657029),
    (1.0, 0.5, 0.75, 0.5),
    (0.5, 0.5, 0.5, 0.5),
];

/// (a, b, x, ln I_x(a, b))
pub const LN_BETA_REFERENCE: [(f64, f64, f64, f64); 5] = [
    (255.5, 0.5, 0.01, -1179.960442425369046),
    (255.5, 0.5, 0.0395, -828.9610469920818824),
    (255.5, 0.5, 0.1, -591.60249286062556437),
    (63.5, 0.5, 0.001, -441.29182110422012028),
    (300.0, 0.5, 0.2, -486.14488965512694511),
];

/// (x, ln Gamma(x))
pub const LGAMMA_REFERENCE: [(f64, f64); 16] = [
    (0.5, 0.57236494292470008707),
    (1.0, 0.0),
    (1.5, -0.12078223763524522235),
    (2.0, 0.0),
    (2.5, 0.28468287047291915963),
    (3.7, 1.4280723266653879219),
    (5.0, 3.1780538303479456196),
    (9.99, 12.77931521435019288),
    (10.1, 13.027526738633237959),
    (33.3, 82.603723581654952928),
    (100.5, 361.43554046777762156),
    (255.5, 1158.9409791500571123),
    (256.0, 1161.7121011184006508),
    (1000.25, 5906.947268271117177),
    (100000.5, 1051293.46543513938),
    (1000000.0, 12815504.56914761166),
];

/// ln A_512(1)
pub const LN_AREA_512: f64 = -867.9681031603942609;
/// capacity(n = 512, theta = 0.7, phi = 0.3, delta = 0.2)
pub const CAPACITY_512_07_03_02: f64 = 1.2737068534889394977e+109;
/// capacity(n = 64, theta = 1.0, phi = 0.5, delta = 0.25)
pub const CAPACITY_64_10_05_025: f64 = 2383245882.3250365049;
/// cap_area_fraction(16, 0.9)
pub const CAP_FRACTION_16_09: f64 = 0.0038627457555889778832;
/// capacity ratio for n = 16 at (omega1, omega2) = (1.2, 0.6)
pub const RATIO_16_12_06: f64 = 3381.2838924302056954;
/// arccos(0.2125) / 2
pub const HALF_ACOS_02125: f64 = 0.67833182186041412377;
/// arccos(0.123) / 2
pub const HALF_ACOS_0123: f64 = 0.72374202580151231143;

/// (n, omega, cap fraction) for the Monte Carlo comparisons
pub const CAP_FRACTION_REFERENCE: [(u32, f64, f64); 17] = [
    (4, 1.2, 0.27446855935925975577),
    (4, 0.6, 0.042647304023738348618),
    (4, 1.0, 0.17359070596374243802),
    (4, 0.9, 0.1314862332928153545),
    (4, 0.3, 0.005627325134683323021),
    (16, 1.2, 0.076450454543115752015),
    (16, 0.6, 0.000022609889312834087479),
    (16, 1.0, 0.012575784867528490721),
    (16, 0.9, 0.0038627457555889778832),
    (16, 0.3, 1.2074461290397913842e-9),
    (64, 1.2, 0.0015072489275858733059),
    (64, 1.3, 0.015611327844993955124),
    (64, 1.4, 0.087931607962174986927),
    (64, 0.6, 1.3853020196548018748e-17),
    (64, 1.0, 1.6958739075674528462e-6),
    (64, 0.9, 1.6381889589553610971e-8),
    (64, 0.3, 2.32121555782858365e-35),
];
