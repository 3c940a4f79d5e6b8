//! Brute-force particle search over bounded windows.
//!
//! A candidate is a window of `width` cells that moves `drift` cells every
//! `period` steps. Between consecutive samples the window must either repeat
//! exactly (classical) or keep one equality pattern when the two samples are
//! concatenated (nominal). Cells that belong to the static background are
//! excluded from every window; the background at a step is the single name
//! that stays in place over more than half of the row.

use std::collections::HashMap;

use serde::Serialize;
use smallvec::SmallVec;

use crate::engine::Diagram;
use crate::pattern::{canonicalize_into, Name};

/// Minimum lifetime, in periods, of a reported particle.
pub const MIN_PERIODS: usize = 3;

/// Window origin: the first sample of a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Window {
    pub step: usize,
    pub cell: usize,
    pub width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ParticleKind {
    Classical,
    /// `proper` when exact name repetition fails somewhere along the track.
    Nominal {
        proper: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Particle {
    pub window: Window,
    pub period: usize,
    /// Cells moved per period; positive is rightwards.
    pub drift: isize,
    /// Number of consecutive repetitions.
    pub periods: usize,
    pub kind: ParticleKind,
}

impl Particle {
    pub fn is_properly_nominal(&self) -> bool {
        matches!(self.kind, ParticleKind::Nominal { proper: true })
    }

    /// Last step covered.
    pub fn end_step(&self) -> usize {
        self.window.step + self.periods * self.period
    }

    /// Window origin cell at sample `k`.
    pub fn cell_at(&self, k: usize, width: usize) -> usize {
        wrap(self.window.cell as isize + self.drift * k as isize, width)
    }

    /// True when `other` moves the same way and its track lies on ours.
    pub fn covers(&self, other: &Particle, row_width: usize) -> bool {
        if self.window.width != other.window.width
            || self.period != other.period
            || self.drift != other.drift
            || other.window.step < self.window.step
        {
            return false;
        }
        let dt = other.window.step - self.window.step;
        dt.is_multiple_of(self.period)
            && self.cell_at(dt / self.period, row_width) == other.window.cell
            && self.end_step() >= other.end_step()
    }
}

/// One name repeating in place over more than half of its row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Background {
    pub period: usize,
    pub drift: isize,
    /// Steps at which a background was found.
    pub steps: Vec<usize>,
    /// Mean fraction of the row covered at those steps.
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleScan {
    pub background: Option<Background>,
    pub particles: Vec<Particle>,
}

#[inline]
fn wrap(x: isize, n: usize) -> usize {
    x.rem_euclid(n as isize) as usize
}

/// Marks the background: cells whose name is unchanged at the next step and
/// shared by more than half of the row's cells that are unchanged in the same
/// way. The last row is compared with the one before it.
pub fn background_mask(diagram: &Diagram) -> (Vec<Vec<bool>>, Option<Background>) {
    let h = diagram.rows.len();
    let n = diagram.width;
    let mut mask = vec![vec![false; n]; h];
    if h < 2 || n == 0 {
        return (mask, None);
    }
    let mut steps = Vec::new();
    let mut covered = 0usize;
    let mut per_name: HashMap<Name, usize> = HashMap::new();
    for (t, mask_row) in mask.iter_mut().enumerate() {
        let (a, b) = if t + 1 < h { (t, t + 1) } else { (t - 1, t) };
        let (now, next) = (&diagram.rows[a], &diagram.rows[b]);
        per_name.clear();
        for i in (0..n).filter(|&i| now[i] == next[i]) {
            *per_name.entry(now[i]).or_default() += 1;
        }
        let Some((&name, &count)) = per_name.iter().max_by_key(|(_, &c)| c) else {
            continue;
        };
        if 2 * count > n {
            for (cell, (x, y)) in mask_row.iter_mut().zip(now.iter().zip(next)) {
                *cell = *x == name && *y == name;
            }
            steps.push(t);
            covered += count;
        }
    }
    let background = (!steps.is_empty()).then(|| Background {
        period: 1,
        drift: 0,
        coverage: covered as f64 / (steps.len() * n) as f64,
        steps,
    });
    (mask, background)
}

struct Search<'a> {
    rows: &'a [Vec<Name>],
    mask: &'a [Vec<bool>],
    n: usize,
}

impl Search<'_> {
    #[inline]
    fn window(&self, t: usize, x: usize, w: usize) -> impl Iterator<Item = Name> + '_ {
        let n = self.n;
        (0..w).map(move |j| self.rows[t][(x + j) % n])
    }

    #[inline]
    fn clear(&self, t: usize, x: usize, w: usize) -> bool {
        (0..w).all(|j| !self.mask[t][(x + j) % self.n])
    }

    #[inline]
    fn valid(&self, t: usize, x: usize, w: usize, p: usize, v: isize) -> bool {
        t + p < self.rows.len()
            && self.clear(t, x, w)
            && self.clear(t + p, wrap(x as isize + v, self.n), w)
    }

    fn exact(&self, t: usize, x: usize, w: usize, p: usize, v: isize) -> bool {
        self.valid(t, x, w, p, v)
            && self
                .window(t, x, w)
                .eq(self.window(t + p, wrap(x as isize + v, self.n), w))
    }

    // Equality pattern of the two samples concatenated.
    fn joint_pattern(
        &self,
        t: usize,
        x: usize,
        w: usize,
        p: usize,
        v: isize,
    ) -> Option<SmallVec<[u8; 16]>> {
        if !self.valid(t, x, w, p, v) {
            return None;
        }
        let next = wrap(x as isize + v, self.n);
        let mut rgs = SmallVec::new();
        let mut distinct = SmallVec::<[Name; 16]>::new();
        canonicalize_into(
            self.window(t, x, w).chain(self.window(t + p, next, w)),
            &mut rgs,
            &mut distinct,
        );
        Some(rgs)
    }

    /// Maximal runs of equal `key` values along every (period, drift) line.
    fn runs<K, F>(&self, p: usize, v: isize, key: F) -> Vec<(usize, usize, usize)>
    where
        K: PartialEq,
        F: Fn(usize, usize) -> Option<K>,
    {
        let h = self.rows.len();
        let mut out = Vec::new();
        for t in 0..h.saturating_sub(p) {
            for x in 0..self.n {
                let Some(k0) = key(t, x) else { continue };
                if t >= p {
                    let prev = wrap(x as isize - v, self.n);
                    if key(t - p, prev).as_ref() == Some(&k0) {
                        continue;
                    }
                }
                let mut len = 1;
                let (mut tt, mut xx) = (t + p, wrap(x as isize + v, self.n));
                while tt + p < h && key(tt, xx).as_ref() == Some(&k0) {
                    len += 1;
                    tt += p;
                    xx = wrap(xx as isize + v, self.n);
                }
                out.push((t, x, len));
            }
        }
        out
    }
}

fn search_space(
    diagram: &Diagram,
    w_max: usize,
    p_max: usize,
) -> impl Iterator<Item = (usize, usize, isize)> {
    let widths = 1..=w_max.min(diagram.width.saturating_sub(1)).max(1);
    let w_max = w_max as isize;
    widths
        .flat_map(move |w| (1..=p_max).flat_map(move |p| (-w_max..=w_max).map(move |v| (w, p, v))))
}

/// Windows of width ≤ `w_max` that repeat exactly every ≤ `p_max` steps
/// under constant drift, for at least [`MIN_PERIODS`] periods. Only the
/// smallest period explaining a track is reported, and drifting tracks over
/// cells that are fixed in place are dropped.
pub fn detect_classical_particles(diagram: &Diagram, w_max: usize, p_max: usize) -> ParticleScan {
    let (mask, background) = background_mask(diagram);
    let s = Search {
        rows: &diagram.rows,
        mask: &mask,
        n: diagram.width,
    };
    let mut particles = Vec::new();
    if diagram.width == 0 || w_max == 0 || p_max == 0 {
        return ParticleScan {
            background,
            particles,
        };
    }
    for (w, p, v) in search_space(diagram, w_max, p_max) {
        for (t, x, len) in s.runs(p, v, |t, x| s.exact(t, x, w, p, v).then_some(())) {
            if len < MIN_PERIODS {
                continue;
            }
            let particle = Particle {
                window: Window {
                    step: t,
                    cell: x,
                    width: w,
                },
                period: p,
                drift: v,
                periods: len,
                kind: ParticleKind::Classical,
            };
            if !has_shorter_period(&s, &particle) && !static_in_place(&s, &particle) {
                particles.push(particle);
            }
        }
    }
    ParticleScan {
        background,
        particles,
    }
}

// A drifting track over cells that also repeat in place belongs to a
// stationary structure.
fn static_in_place(s: &Search<'_>, particle: &Particle) -> bool {
    if particle.drift == 0 {
        return false;
    }
    (0..particle.periods).all(|k| {
        let t = particle.window.step + k * particle.period;
        s.exact(
            t,
            particle.cell_at(k, s.n),
            particle.window.width,
            particle.period,
            0,
        )
    })
}

// True when a divisor period with proportional drift repeats over the same span.
fn has_shorter_period(s: &Search<'_>, particle: &Particle) -> bool {
    let p = particle.period;
    let w = particle.window.width;
    (1..p).filter(|q| p.is_multiple_of(*q)).any(|q| {
        let ratio = (p / q) as isize;
        if particle.drift % ratio != 0 {
            return false;
        }
        let v = particle.drift / ratio;
        let steps = particle.periods * (p / q);
        let mut x = particle.window.cell;
        let mut t = particle.window.step;
        for _ in 0..steps {
            if !s.exact(t, x, w, q, v) {
                return false;
            }
            t += q;
            x = wrap(x as isize + v, s.n);
        }
        true
    })
}

/// Windows whose consecutive samples share one joint equality pattern for at
/// least [`MIN_PERIODS`] periods. Every classical track is also found here,
/// with the same window, period and drift.
pub fn detect_nominal_particles(diagram: &Diagram, w_max: usize, p_max: usize) -> ParticleScan {
    let (mask, background) = background_mask(diagram);
    let s = Search {
        rows: &diagram.rows,
        mask: &mask,
        n: diagram.width,
    };
    let mut particles = Vec::new();
    if diagram.width == 0 || w_max == 0 || p_max == 0 {
        return ParticleScan {
            background,
            particles,
        };
    }
    for (w, p, v) in search_space(diagram, w_max, p_max) {
        for (t, x, len) in s.runs(p, v, |t, x| s.joint_pattern(t, x, w, p, v)) {
            if len < MIN_PERIODS {
                continue;
            }
            let mut particle = Particle {
                window: Window {
                    step: t,
                    cell: x,
                    width: w,
                },
                period: p,
                drift: v,
                periods: len,
                kind: ParticleKind::Nominal { proper: false },
            };
            if static_in_place(&s, &particle) {
                continue;
            }
            let proper = (0..len).any(|k| !s.exact(t + k * p, particle.cell_at(k, s.n), w, p, v));
            particle.kind = ParticleKind::Nominal { proper };
            particles.push(particle);
        }
    }
    ParticleScan {
        background,
        particles,
    }
}
