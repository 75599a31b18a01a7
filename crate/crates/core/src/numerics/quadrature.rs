//! Cumulative Simpson antiderivatives tabulated on a fixed node set `kδ`.
//!
//! Nodes are accumulated outward from 0 in both directions. Evaluation at an
//! arbitrary `t` starts from the node on the origin side of `t` and adds one
//! sub-cell Simpson step, so tabulated nodes are reproduced exactly.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Nodes {
    delta: f64,
    lo: f64,
    hi: f64,
    /// Index of t = 0 in the node vectors.
    zero: usize,
}

impl Nodes {
    fn new(lo: f64, hi: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidInput("quadrature spacing must be positive".into()));
        }
        if !(lo <= 0.0 && hi >= 0.0 && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidInput("quadrature span must contain 0".into()));
        }
        let zero = (-lo / delta + 1e-9).floor() as usize;
        Ok(Self { delta, lo, hi, zero })
    }

    fn count_pos(&self) -> usize {
        (self.hi / self.delta + 1e-9).floor() as usize
    }

    fn t(&self, idx: usize) -> f64 {
        (idx as f64 - self.zero as f64) * self.delta
    }

    /// Node index on the origin side of `t`.
    fn anchor(&self, t: f64, len: usize) -> Result<usize> {
        if !(t >= self.lo && t <= self.hi) {
            return Err(Error::OutOfSpan {
                t,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let k = (t / self.delta).trunc();
        let idx = (self.zero as f64 + k).clamp(0.0, (len - 1) as f64) as usize;
        Ok(idx)
    }
}

/// `W` with `W'' = g`, `W(0) = w0`, `W'(0) = d0`.
#[derive(Clone, Debug)]
pub struct SecondAntiderivative {
    nodes: Nodes,
    g: Vec<f64>,
    w1: Vec<f64>,
    w0: Vec<f64>,
}

impl SecondAntiderivative {
    pub fn build<G>(g: G, lo: f64, hi: f64, delta: f64, w0: f64, d0: f64) -> Result<Self>
    where
        G: Fn(f64) -> Result<f64>,
    {
        let nodes = Nodes::new(lo, hi, delta)?;
        let len = nodes.zero + nodes.count_pos() + 1;
        let mut gv = vec![0.0; len];
        let mut w1 = vec![0.0; len];
        let mut wv = vec![0.0; len];
        let z = nodes.zero;
        gv[z] = g(0.0)?;
        w1[z] = d0;
        wv[z] = w0;
        let step = |from: usize, to: usize, gv: &mut [f64], w1: &mut [f64], wv: &mut [f64]| -> Result<()> {
            let (ta, tb) = (nodes.t(from), nodes.t(to));
            let h = tb - ta;
            let gm = g(0.5 * (ta + tb))?;
            let gb = g(tb)?;
            gv[to] = gb;
            w1[to] = w1[from] + h / 6.0 * (gv[from] + 4.0 * gm + gb);
            wv[to] = wv[from] + h * w1[from] + h * h / 6.0 * (gv[from] + 2.0 * gm);
            Ok(())
        };
        for i in z + 1..len {
            step(i - 1, i, &mut gv, &mut w1, &mut wv)?;
        }
        for i in (0..z).rev() {
            step(i + 1, i, &mut gv, &mut w1, &mut wv)?;
        }
        Ok(Self {
            nodes,
            g: gv,
            w1,
            w0: wv,
        })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.nodes.lo, self.nodes.hi)
    }

    pub fn delta(&self) -> f64 {
        self.nodes.delta
    }

    /// Tabulated `(t, W, W', W'')` at every node, in increasing `t`.
    pub fn table(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.g.len()).map(|i| (self.nodes.t(i), self.w0[i], self.w1[i], self.g[i]))
    }

    /// `(W(t), W'(t))`; `g` must be the integrand used to build the table.
    pub fn eval<G>(&self, g: G, t: f64) -> Result<(f64, f64)>
    where
        G: Fn(f64) -> Result<f64>,
    {
        let k = self.nodes.anchor(t, self.g.len())?;
        let tk = self.nodes.t(k);
        let h = t - tk;
        if h == 0.0 {
            return Ok((self.w0[k], self.w1[k]));
        }
        let gm = g(tk + 0.5 * h)?;
        let gb = g(t)?;
        let d = self.w1[k] + h / 6.0 * (self.g[k] + 4.0 * gm + gb);
        let w = self.w0[k] + h * self.w1[k] + h * h / 6.0 * (self.g[k] + 2.0 * gm);
        Ok((w, d))
    }
}

/// `F` with `F' = g`, `F(0) = f0`.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    nodes: Nodes,
    g: Vec<f64>,
    f: Vec<f64>,
}

impl Antiderivative {
    pub fn build<G>(g: G, lo: f64, hi: f64, delta: f64, f0: f64) -> Result<Self>
    where
        G: Fn(f64) -> Result<f64>,
    {
        let nodes = Nodes::new(lo, hi, delta)?;
        let len = nodes.zero + nodes.count_pos() + 1;
        let mut gv = vec![0.0; len];
        let mut fv = vec![0.0; len];
        let z = nodes.zero;
        gv[z] = g(0.0)?;
        fv[z] = f0;
        let step = |from: usize, to: usize, gv: &mut [f64], fv: &mut [f64]| -> Result<()> {
            let (ta, tb) = (nodes.t(from), nodes.t(to));
            let gm = g(0.5 * (ta + tb))?;
            gv[to] = g(tb)?;
            fv[to] = fv[from] + (tb - ta) / 6.0 * (gv[from] + 4.0 * gm + gv[to]);
            Ok(())
        };
        for i in z + 1..len {
            step(i - 1, i, &mut gv, &mut fv)?;
        }
        for i in (0..z).rev() {
            step(i + 1, i, &mut gv, &mut fv)?;
        }
        Ok(Self { nodes, g: gv, f: fv })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.nodes.lo, self.nodes.hi)
    }

    pub fn eval<G>(&self, g: G, t: f64) -> Result<f64>
    where
        G: Fn(f64) -> Result<f64>,
    {
        let k = self.nodes.anchor(t, self.g.len())?;
        let tk = self.nodes.t(k);
        let h = t - tk;
        if h == 0.0 {
            return Ok(self.f[k]);
        }
        Ok(self.f[k] + h / 6.0 * (self.g[k] + 4.0 * g(tk + 0.5 * h)? + g(t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_antiderivative_of_cos() {
        let g = |t: f64| Ok(t.cos());
        // W = 1 - cos t + 2 t + 3  (W'' = cos, W(0) = 3, W'(0) = 2)
        let w = SecondAntiderivative::build(g, -2.0, 3.0, 1e-2, 3.0, 2.0).unwrap();
        for &t in &[-2.0, -1.234, -0.005, 0.0, 0.7, 2.999, 3.0] {
            let (v, d) = w.eval(g, t).unwrap();
            assert!((v - (1.0 - t.cos() + 2.0 * t + 3.0)).abs() < 1e-10, "t = {t}");
            assert!((d - (t.sin() + 2.0)).abs() < 1e-10, "t = {t}");
        }
        assert!(w.eval(g, 3.5).is_err());
    }

    #[test]
    fn antiderivative_of_exp() {
        let g = |t: f64| Ok(t.exp());
        let f = Antiderivative::build(g, -1.0, 1.0, 1e-3, 1.0).unwrap();
        for &t in &[-1.0, -0.3333, 0.0, 0.5, 1.0] {
            assert!((f.eval(g, t).unwrap() - t.exp()).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn cubic_is_integrated_exactly() {
        let g = |t: f64| Ok(t * t * t - t);
        let f = Antiderivative::build(g, -1.0, 1.0, 0.1, 0.0).unwrap();
        let t = 0.77;
        assert!((f.eval(g, t).unwrap() - (t.powi(4) / 4.0 - t * t / 2.0)).abs() < 1e-14);
    }
}
