//! Published reference values used by the reproduce harness.
#![allow(clippy::approx_constant)]

/// Which figure graph a row refers to.
pub const FIGURE_GRAPHS: [&str; 3] = ["fig-a", "fig-b", "fig-c"];

/// Best cut fractions `[graph][p - 1]` for multi-angle QAOA.
pub const MA_VALUES: [[f64; 3]; 3] = [
    [0.65172, 0.69754, 0.72506],
    [0.66238, 0.74999, 0.76414],
    [0.67642, 0.72485, 0.75435],
];

/// Best cut fractions `[graph][p - 1]` for QAOA.
pub const QAOA_VALUES: [[f64; 3]; 3] = [
    [0.64590, 0.69335, 0.72071],
    [0.66238, 0.72780, 0.76414],
    [0.65991, 0.72084, 0.74554],
];

/// Published angles: layer-major gammas and betas.
#[derive(Clone, Copy, Debug)]
pub struct PublishedAngles {
    pub gammas: &'static [f64],
    pub betas: &'static [f64],
}

const fn angles(gammas: &'static [f64], betas: &'static [f64]) -> PublishedAngles {
    PublishedAngles { gammas, betas }
}

/// Multi-angle optima `[graph][p - 1]`, two sharing classes per layer.
pub const MA_ANGLES: [[PublishedAngles; 3]; 3] = [
    [
        angles(&[0.1901, 0.3195], &[0.3814]),
        angles(&[0.1440, 0.2494, 0.2880, 0.4576], &[0.5221, 0.2725]),
        angles(
            &[0.1156, 0.2294, 0.2565, 0.3943, 0.3047, 0.4685],
            &[0.5753, 0.4004, 0.2139],
        ),
    ],
    [
        angles(&[0.2617, 0.2617], &[0.3927]),
        angles(&[0.0, 0.4522, 0.0, 0.5592], &[0.5592, 0.4522]),
        angles(
            &[0.1698, 0.1698, 0.3047, 0.3047, 0.3576, 0.3576],
            &[0.6037, 0.4643, 0.2422],
        ),
    ],
    [
        angles(&[0.1908, 0.5021], &[0.3835]),
        angles(&[0.2390, 0.2763, 0.4102, 0.6389], &[0.4663, 0.2589]),
        angles(
            &[0.0, 0.7853, 1.3256, 1.3615, 1.5708, 0.3415],
            &[0.3926, 0.7853, 0.7854],
        ),
    ],
];

/// QAOA optima `[graph][p - 1]`.
pub const QAOA_ANGLES: [[PublishedAngles; 3]; 3] = [
    [
        angles(&[0.2536], &[0.3662]),
        angles(&[0.2048, 0.3902], &[0.4857, 0.2578]),
        angles(&[0.1786, 0.3448, 0.4000], &[0.5506, 0.3738, 0.2016]),
    ],
    [
        angles(&[0.2617], &[0.3927]),
        angles(&[0.1978, 0.3534], &[0.5557, 0.3133]),
        angles(&[0.1698, 0.3047, 0.3576], &[0.6037, 0.4643, 0.2422]),
    ],
    [
        angles(&[0.2851], &[0.3481]),
        angles(&[0.2917, 0.5623], &[0.4090, 0.2408]),
        angles(&[0.2014, 0.4855, 0.5916], &[0.5410, 0.3187, 0.1851]),
    ],
];

/// Classical columns in reporting order.
pub const CLASSICAL_COLUMNS: [&str; 7] = ["threshold", "para1", "para2", "para3a", "para3b", "para4a", "para4b"];

/// Classical estimates `[graph][k - 1][column]`; `None` where columns are merged.
pub const CLASSICAL_VALUES: [[[Option<f64>; 7]; 3]; 3] = [
    [
        [
            Some(0.601),
            Some(0.639),
            Some(0.644),
            Some(0.627),
            Some(0.639),
            Some(0.639),
            Some(0.639),
        ],
        [
            Some(0.675),
            Some(0.682),
            Some(0.677),
            Some(0.678),
            Some(0.674),
            Some(0.678),
            Some(0.674),
        ],
        [
            Some(0.713),
            Some(0.701),
            Some(0.694),
            Some(0.692),
            Some(0.695),
            Some(0.695),
            Some(0.695),
        ],
    ],
    [
        [
            Some(0.640),
            Some(0.664),
            Some(0.666),
            Some(0.664),
            None,
            Some(0.664),
            None,
        ],
        [
            Some(0.718),
            Some(0.733),
            Some(0.725),
            Some(0.727),
            None,
            Some(0.727),
            None,
        ],
        [
            Some(0.766),
            Some(0.765),
            Some(0.752),
            Some(0.757),
            None,
            Some(0.757),
            None,
        ],
    ],
    [
        [
            Some(0.645),
            Some(0.643),
            Some(0.655),
            Some(0.609),
            Some(0.643),
            Some(0.643),
            Some(0.643),
        ],
        [
            Some(0.657),
            Some(0.685),
            Some(0.676),
            Some(0.668),
            Some(0.659),
            Some(0.676),
            Some(0.659),
        ],
        [
            Some(0.713),
            Some(0.698),
            Some(0.684),
            Some(0.661),
            Some(0.683),
            Some(0.680),
            Some(0.683),
        ],
    ],
];

/// Optimal threshold vectors `[graph][steps - 1]`; several entries mean a reported tie.
pub const THRESHOLDS: [[&[&[usize]]; 3]; 3] = [
    [&[&[2], &[3]], &[&[3, 2]], &[&[2, 3, 2]]],
    [&[&[2]], &[&[2, 3]], &[&[2, 3, 2]]],
    [&[&[2]], &[&[2, 2]], &[&[1, 2, 2]]],
];

pub const TILINGS: [&str; 2] = ["tiling-5-6", "tiling-3-4-6"];

/// Tiling rows `[tiling][p - 1]`: ma, qaoa, then the seven classical columns.
pub const TILING_VALUES: [[[f64; 9]; 2]; 2] = [
    [
        [0.69245, 0.69245, 0.687, 0.691, 0.695, 0.691, 0.691, 0.691, 0.691],
        [0.75296, 0.75243, 0.730, 0.736, 0.734, 0.721, 0.736, 0.736, 0.736],
    ],
    [
        [0.65172, 0.64589, 0.601, 0.639, 0.644, 0.639, 0.627, 0.639, 0.639],
        [0.70420, 0.69970, 0.686, 0.691, 0.679, 0.672, 0.676, 0.672, 0.672],
    ],
];

pub fn figure_index(name: &str) -> Option<usize> {
    FIGURE_GRAPHS.iter().position(|&g| g == name)
}
