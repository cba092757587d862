//! Sampling of the q-numerical range and its convex hull.

use std::io;

use crate::error::{Error, Result};
use crate::kernel;
use crate::matrix::{CMatrix, C64};
use crate::random::rng_from;
use crate::semi::SemiSpace;

use super::sphere::{self, AscentCfg, SphereObjective, Workspace};
use super::{random_pair, QObjective, QParam};

/// Sampled points of `W_{q,A}(T)` with their convex hull.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<C64>,
    /// Indices into `points`, counter-clockwise, starting from the lowest-leftmost point.
    pub hull: Vec<usize>,
}

impl PointCloud {
    pub fn from_points(points: Vec<C64>) -> Self {
        let hull = convex_hull(&points);
        PointCloud { points, hull }
    }

    pub fn on_hull(&self) -> Vec<bool> {
        let mut flags = vec![false; self.points.len()];
        for &i in &self.hull {
            flags[i] = true;
        }
        flags
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Writes the `re,im,on_hull` table in sample order.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io_err = |e: csv::Error| Error::Parse(e.to_string());
        wr.write_record(["re", "im", "on_hull"]).map_err(io_err)?;
        for (p, h) in self.points.iter().zip(self.on_hull()) {
            wr.write_record([format!("{:?}", p.re), format!("{:?}", p.im), (h as u8).to_string()]).map_err(io_err)?;
        }
        wr.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Andrew's monotone chain; collinear boundary points are dropped.
pub(crate) fn convex_hull(points: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].re.total_cmp(&points[b].re).then(points[a].im.total_cmp(&points[b].im)));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in iter {
            while hull.len() >= start + 2
                && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// `x -> Re(e^{-i phi} <Tx, y>)` maximized over the partner `y` in closed form.
struct DirObjective<'a> {
    base: &'a QObjective,
    c: C64,
}

impl SphereObjective for DirObjective<'_> {
    fn dim(&self) -> usize {
        self.base.r
    }

    fn value(&self, x: &[C64], ws: &mut Workspace) -> f64 {
        let (mu, rn) = self.base.parts(x, ws);
        (self.c * mu).re + self.base.qs * rn
    }

    fn value_grad(&self, x: &[C64], g: &mut [C64], ws: &mut Workspace) -> f64 {
        let r = self.base.r;
        let (mu, rn) = self.base.parts(x, ws);
        QObjective::apply(r, &self.base.th, x, &mut ws.thx);
        for i in 0..r {
            g[i] = self.c * ws.tx[i] + self.c.conj() * ws.thx[i];
        }
        if self.base.qs > 0.0 && rn > 1e-14 {
            let res = ws.res.clone();
            QObjective::apply(r, &self.base.th, &res, &mut ws.aux);
            let k = self.base.qs / rn;
            for i in 0..r {
                g[i] += (ws.aux[i] - mu.conj() * ws.tx[i]) * k;
            }
        }
        (self.c * mu).re + self.base.qs * rn
    }
}

/// Samples `n_points` members of `W_{q,A}(T)`: uniformly drawn admissible pairs,
/// followed by up to 64 boundary-seeking points on a uniform direction grid.
pub fn q_range_sample(space: Option<&SemiSpace>, t: &CMatrix, q: QParam, n_points: usize, seed: u64) -> Result<PointCloud> {
    let ttil = match space {
        Some(s) => s.compress(t)?.mat,
        None => {
            t.ensure_square()?;
            t.clone()
        }
    };
    let r = ttil.rows();
    if r < 2 && q.modulus() < 1.0 {
        return Err(Error::DimensionTooSmall { dim: r });
    }
    let n_dir = (n_points / 4).min(64);
    let n_rand = n_points - n_dir;
    let mut points = Vec::with_capacity(n_points);
    let mut rng = rng_from(seed, &[0x524e_4745]);
    let tx_buf = |x: &[C64], y: &[C64]| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..r {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..r {
                row += ttil.get(i, j) * x[j];
            }
            acc += y[i].conj() * row;
        }
        acc
    };
    for _ in 0..n_rand {
        let (x, y) = random_pair(&mut rng, r, q);
        points.push(tx_buf(&x, &y));
    }
    let base = QObjective::new(&ttil, q);
    let mut ws = Workspace::new(r);
    let cfg = AscentCfg { max_iter: 200, rel_tol: 1e-12 };
    for k in 0..n_dir {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n_dir as f64;
        let rot = C64::from_polar(1.0, -phi);
        let c = rot * q.value();
        let obj = DirObjective { base: &base, c };
        // Start from the top eigenvector of Re(c T), or of Re(e^{-i phi} T) when q = 0.
        let lead = if c.norm() > 0.0 { c } else { rot };
        let h = ttil.scale(lead);
        let e = kernel::herm_eig_unchecked(&(&h + h.adjoint()).scale_re(0.5));
        let x0: Vec<C64> = e.vectors.column(r - 1).iter().copied().collect();
        let res = sphere::maximize(&obj, &x0, cfg, &mut ws);
        let (mu, rn) = base.parts(&res.x, &mut ws);
        points.push(q.value() * mu + C64::from_polar(q.complement() * rn, phi));
    }
    Ok(PointCloud::from_points(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::qnr::{q_radius, SolverCfg};

    #[test]
    fn identity_range_is_a_point() {
        let cloud = q_range_sample(None, &CMatrix::identity(2), QParam::real(0.5).unwrap(), 40, 3).unwrap();
        assert_eq!(cloud.points.len(), 40);
        assert!(cloud.points.iter().all(|p| (p - c(0.5, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn jordan_range_stays_in_disc() {
        let j = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let cloud = q_range_sample(None, &j, QParam::real(1.0).unwrap(), 400, 5).unwrap();
        assert!(cloud.max_modulus() <= 0.5 + 1e-12);
        // Directional points land on the boundary circle.
        assert!(cloud.max_modulus() > 0.5 - 1e-9);
    }

    #[test]
    fn empty_cloud() {
        let cloud = q_range_sample(None, &CMatrix::identity(2), QParam::real(0.5).unwrap(), 0, 1).unwrap();
        assert!(cloud.points.is_empty() && cloud.hull.is_empty());
    }

    #[test]
    fn points_bounded_by_radius() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, 0.5), c(-1.0, 0.5)]]);
        let q = QParam::new(c(0.2, 0.4)).unwrap();
        let cloud = q_range_sample(None, &m, q, 500, 9).unwrap();
        let w = q_radius(None, &m, q, &SolverCfg::default()).unwrap().value;
        assert!(cloud.max_modulus() <= w + 1e-9);
        // 64 directions put the best point within a few per mille of the radius.
        assert!(cloud.max_modulus() > w * (1.0 - 1e-2));
    }

    #[test]
    fn hull_of_square() {
        let pts = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.5), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.0)];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn csv_layout() {
        let cloud = PointCloud::from_points(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.2, 0.2)]);
        let mut out = Vec::new();
        cloud.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "re,im,on_hull\n0.0,0.0,1\n1.0,0.0,1\n0.0,1.0,1\n0.2,0.2,0\n");
    }
}
