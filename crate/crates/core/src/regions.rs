//! Average-power coverage regions on a pixel grid.
//!
//! Without fading, max-SINR association reduces to maximum received power
//! `P_i |x - x_i|^-alpha`, whose cells form a multiplicatively weighted
//! Voronoi tessellation with circular boundaries between unequal tiers.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::model::{Deployment, NetworkModel};

/// Tier colors, tier 1 first; tiers beyond the list wrap around.
pub const TIER_PALETTE: [[u8; 3]; 6] = [
    [0x1f, 0x4e, 0x9c], // blue
    [0xe8, 0x8a, 0x1a], // orange
    [0x3a, 0x9e, 0x4f], // green
    [0xc4, 0x3b, 0x3b], // red
    [0x7d, 0x4f, 0xa8], // purple
    [0x8c, 0x8c, 0x8c], // gray
];

/// Pixels on a boundary between two stations.
pub const EDGE_COLOR: [u8; 3] = [0x10, 0x10, 0x10];

/// Pixel owners of a square `extent x extent` meter window centred on the
/// origin. Row 0 is the top (largest y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionRaster {
    pub width: usize,
    pub height: usize,
    /// Side length of the window, meters, stored as raw bits so the raster
    /// stays `Eq`.
    extent_bits: u64,
    /// Row-major `(station, tier)` owner of each pixel.
    pub cells: Vec<(usize, usize)>,
}

impl RegionRaster {
    pub fn extent(&self) -> f64 {
        f64::from_bits(self.extent_bits)
    }

    #[inline]
    pub fn owner(&self, row: usize, col: usize) -> (usize, usize) {
        self.cells[row * self.width + col]
    }

    /// Coordinates of the centre of pixel `(row, col)`.
    pub fn pixel_center(&self, row: usize, col: usize) -> [f64; 2] {
        pixel_center(self.width, self.height, self.extent(), row, col)
    }

    fn is_edge(&self, row: usize, col: usize) -> bool {
        let here = self.owner(row, col).0;
        (col + 1 < self.width && self.owner(row, col + 1).0 != here)
            || (row + 1 < self.height && self.owner(row + 1, col).0 != here)
    }

    /// RGB color of a pixel: its tier color, or [`EDGE_COLOR`] when the
    /// right or lower neighbour belongs to another station.
    pub fn color(&self, row: usize, col: usize) -> [u8; 3] {
        if self.is_edge(row, col) {
            EDGE_COLOR
        } else {
            TIER_PALETTE[self.owner(row, col).1 % TIER_PALETTE.len()]
        }
    }

    /// Binary PPM (P6), 8 bits per channel.
    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let mut row_buf = Vec::with_capacity(self.width * 3);
        for row in 0..self.height {
            row_buf.clear();
            for col in 0..self.width {
                row_buf.extend_from_slice(&self.color(row, col));
            }
            out.write_all(&row_buf)?;
        }
        Ok(())
    }

    /// `row,col,station,tier` per pixel; station zero-based, tier one-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,station,tier")?;
        for row in 0..self.height {
            for col in 0..self.width {
                let (station, tier) = self.owner(row, col);
                writeln!(out, "{row},{col},{station},{}", tier + 1)?;
            }
        }
        Ok(())
    }
}

fn pixel_center(width: usize, height: usize, extent: f64, row: usize, col: usize) -> [f64; 2] {
    let x = ((col as f64 + 0.5) / width as f64 - 0.5) * extent;
    let y = (0.5 - (row as f64 + 0.5) / height as f64) * extent;
    [x, y]
}

/// Assigns each pixel centre to the station with the largest average received
/// power, ties going to the lowest station index.
pub fn rasterize(
    deployment: &Deployment,
    model: &NetworkModel<f64>,
    width: usize,
    height: usize,
    extent: f64,
) -> Result<RegionRaster> {
    if deployment.is_empty() {
        return Err(Error::EmptyDeployment);
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(
            "raster dimensions must be at least 1",
        ));
    }
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(Error::InvalidArgument("raster extent must be positive"));
    }
    model.validate()?;

    // argmax P d^-alpha == argmin d^2 P^(-2/alpha)
    let exponent = -2.0 / model.alpha;
    let sites: Vec<([f64; 2], f64, usize)> = deployment
        .stations
        .iter()
        .map(|s| {
            let power = model.tiers[s.tier].power;
            (s.position, power.powf(exponent), s.tier)
        })
        .collect();

    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        for col in 0..width {
            let [x, y] = pixel_center(width, height, extent, row, col);
            let mut best = (f64::INFINITY, 0usize);
            for (k, &([sx, sy], scale, _)) in sites.iter().enumerate() {
                let (dx, dy) = (x - sx, y - sy);
                let score = (dx * dx + dy * dy) * scale;
                if score < best.0 {
                    best = (score, k);
                }
            }
            cells.push((best.1, sites[best.1].2));
        }
    }
    Ok(RegionRaster {
        width,
        height,
        extent_bits: extent.to_bits(),
        cells,
    })
}
