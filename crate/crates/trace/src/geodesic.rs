//! The exact tracer: event-driven advance of a ray through the cylinder
//! charts of a tiling.

use cylinder::SurfPoint;
use exactnum::{rat_int, rat_mod_pos, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;
use tiling::{Parity, Side, Tiling, VertexClass};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    /// The start point is a zero of the metric; its cone angle leaves no
    /// canonical launch direction in a single chart.
    #[error("trace must not start at a zero of the metric")]
    StartsAtSingularity,
    /// The point does not lie in any cylinder chart of the tiling.
    #[error("point lies outside the cylinder charts of the tiling")]
    PointOutsideTiling,
    /// The direction vector must be a primitive integer vector.
    #[error("direction ({0}, {1}) is not a primitive integer vector")]
    NonPrimitiveDirection(i64, i64),
}

/// One traversal of a glued boundary edge (or of a transparent boundary
/// vertex), with the state of the ray just after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// Position after the traversal, in the chart of the entered cylinder.
    pub point: SurfPoint,
    /// Direction after the traversal (negated across rotation gluings).
    pub direction: (i64, i64),
    /// Length accumulated from the start of the segment.
    pub length: Rational,
}

/// A traced geodesic segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: SurfPoint,
    /// Initial direction (primitive integer vector).
    pub direction: (i64, i64),
    /// Total traced length.
    pub length: Rational,
    /// Boundary traversals in order; interior unit-square edges are
    /// chart-trivial translations and are not recorded.
    pub crossings: Vec<Crossing>,
}

impl Segment {
    /// Direction of the ray on arrival at its endpoint.
    pub fn final_direction(&self) -> (i64, i64) {
        self.crossings.last().map_or(self.direction, |c| c.direction)
    }
}

/// Terminal state of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceResult {
    /// The stop target was reached; `at` is the chart description through
    /// which it was hit.
    ReachedTarget { at: SurfPoint, segment: Segment },
    /// The ray ran into a zero or pole at the recorded position.
    HitSingularity { at: SurfPoint, segment: Segment },
    /// The length bound (or the period cap of a target stop) was exhausted.
    ExhaustedLength { at: SurfPoint, segment: Segment },
}

impl TraceResult {
    pub fn segment(&self) -> &Segment {
        match self {
            TraceResult::ReachedTarget { segment, .. }
            | TraceResult::HitSingularity { segment, .. }
            | TraceResult::ExhaustedLength { segment, .. } => segment,
        }
    }

    pub fn end(&self) -> &SurfPoint {
        match self {
            TraceResult::ReachedTarget { at, .. }
            | TraceResult::HitSingularity { at, .. }
            | TraceResult::ExhaustedLength { at, .. } => at,
        }
    }
}

/// Stop rule of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stop {
    /// Stop after tracing this length.
    Length(Rational),
    /// Stop when the ray first reaches this point.  The trace is cut off at
    /// [`default_cap`], beyond which an unobstructed ray has closed up and
    /// can never reach the point.
    Target(SurfPoint),
}

/// Length bound after which a ray that has met no singularity must have
/// closed up.  A ray avoiding all vertices projects to a straight line on
/// the pillowcase, which closes after length 2, so its return time upstairs
/// is at most twice the covering degree; a ray launched at a vertex meets a
/// vertex at every integral length and therefore repeats a (corner
/// position, direction sign) state within twice the corner count.  Both are
/// dominated by `2·(4·squares) + 2`.
pub fn default_cap(t: &Tiling) -> Rational {
    rat_int(8 * t.squares.len() as i64 + 2)
}

/// Exact straight-line trace from `start` in direction `dir`.
///
/// The direction is read in the chart of `start.cyl` (x right, y down) and
/// must be primitive.  Zeros and poles stop the ray; regular vertices are
/// passed straight through.  Starting at a pole is allowed, starting at a
/// zero is not.
pub fn trace(
    t: &Tiling,
    start: &SurfPoint,
    dir: (i64, i64),
    stop: &Stop,
) -> Result<TraceResult, TraceError> {
    let (p, q) = dir;
    if p.unsigned_abs().gcd(&q.unsigned_abs()) != 1 {
        return Err(TraceError::NonPrimitiveDirection(p, q));
    }
    let (ci, x, y) = normalize(t, start)?;
    if x.is_integer() && y.is_integer() {
        let class = t.vertex_class_at(ci, int_of(&x), int_of(&y));
        if class == VertexClass::Zero {
            return Err(TraceError::StartsAtSingularity);
        }
    }
    let (targets, cap) = match stop {
        Stop::Length(l) => (Vec::new(), l.clone()),
        Stop::Target(pt) => (descriptions(t, pt)?, default_cap(t)),
    };
    let start_pt = SurfPoint { cyl: ci, x: x.clone(), y: y.clone() };
    let mut tr = Tracer {
        t,
        ci,
        x,
        y,
        p,
        q,
        len: Rational::zero(),
        crossings: Vec::new(),
        targets,
        cap,
        start: start_pt,
        dir0: dir,
        launching: true,
    };
    Ok(tr.run())
}

/// All chart descriptions of a point: one for chart-interior points, two for
/// points in the interior of a glued boundary edge, and the full corner
/// orbit for a boundary vertex.
pub fn descriptions(t: &Tiling, pt: &SurfPoint) -> Result<Vec<SurfPoint>, TraceError> {
    let (ci, x, y) = normalize(t, pt)?;
    let h = rat_int(t.height(ci) as i64);
    let mut out = vec![SurfPoint { cyl: ci, x: x.clone(), y: y.clone() }];
    if y.is_zero() || y == h {
        if x.is_integer() {
            out = vertex_positions(t, ci, int_of(&x), int_of(&y))
                .into_iter()
                .map(|(c, a, b)| SurfPoint {
                    cyl: c,
                    x: rat_int(a as i64),
                    y: rat_int(b as i64),
                })
                .collect();
        } else {
            let col = int_of(&x.floor());
            let side = if y.is_zero() { Side::Top } else { Side::Bottom };
            let f = &x - rat_int(col as i64);
            let (cj, x2, y2, _, _) = cross(t, ci, col, side, &f, 0, 0);
            out.push(SurfPoint { cyl: cj, x: x2, y: y2 });
            out.sort();
            out.dedup();
        }
    }
    Ok(out)
}

/// All chart positions of the vertex at the integral position (ci, x, y):
/// the closure of the position under the boundary gluings.
pub fn vertex_positions(t: &Tiling, ci: usize, x: u64, y: u64) -> Vec<(usize, u64, u64)> {
    let w = t.width(ci);
    let h = t.height(ci);
    let first = (ci, x % w, y);
    if y != 0 && y != h {
        return vec![first];
    }
    let mut seen = std::collections::BTreeSet::from([first]);
    let mut queue = vec![first];
    while let Some((c, a, b)) = queue.pop() {
        let wc = t.width(c);
        let side = if b == 0 { Side::Top } else { Side::Bottom };
        for (col, f) in [(a, Rational::zero()), ((a + wc - 1) % wc, Rational::one())] {
            let (c2, x2, y2, _, _) = cross(t, c, col, side, &f, 0, 0);
            let pos = (c2, int_of(&x2), int_of(&y2));
            if seen.insert(pos) {
                queue.push(pos);
            }
        }
    }
    seen.into_iter().collect()
}

fn normalize(t: &Tiling, pt: &SurfPoint) -> Result<(usize, Rational, Rational), TraceError> {
    if pt.cyl >= t.cyls.len() {
        return Err(TraceError::PointOutsideTiling);
    }
    let w = rat_int(t.width(pt.cyl) as i64);
    let h = rat_int(t.height(pt.cyl) as i64);
    if pt.y.is_negative() || pt.y > h {
        return Err(TraceError::PointOutsideTiling);
    }
    Ok((pt.cyl, rat_mod_pos(&pt.x, &w), pt.y.clone()))
}

fn int_of(r: &Rational) -> u64 {
    u64::try_from(&r.to_integer()).expect("chart coordinate fits in u64")
}

/// Transport a boundary point across the glued edge `side` of the square at
/// (ci, col) on the matching boundary row, at fraction `f ∈ [0, 1]` of the
/// edge's x extent, carrying the direction through the gluing's parity.
fn cross(
    t: &Tiling,
    ci: usize,
    col: u64,
    side: Side,
    f: &Rational,
    p: i64,
    q: i64,
) -> (usize, Rational, Rational, i64, i64) {
    let row = match side {
        Side::Top => 0,
        Side::Bottom => t.height(ci) - 1,
        _ => unreachable!("only horizontal boundaries are crossed"),
    };
    let (sq2, side2, parity) = t.partner(t.square_id(ci, col, row), side);
    let psq = t.squares[sq2];
    let (f2, p2, q2) = match parity {
        Parity::Translation => (f.clone(), p, q),
        Parity::RotationByPi => (Rational::one() - f, -p, -q),
    };
    let w2 = rat_int(t.width(psq.cyl) as i64);
    let x2 = rat_mod_pos(&(rat_int(psq.col as i64) + f2), &w2);
    let y2 = match side2 {
        Side::Top => Rational::zero(),
        Side::Bottom => rat_int(t.height(psq.cyl) as i64),
        _ => unreachable!("horizontal boundaries glue to horizontal boundaries"),
    };
    (psq.cyl, x2, y2, p2, q2)
}

struct Tracer<'a> {
    t: &'a Tiling,
    ci: usize,
    x: Rational,
    y: Rational,
    p: i64,
    q: i64,
    len: Rational,
    crossings: Vec<Crossing>,
    targets: Vec<SurfPoint>,
    cap: Rational,
    start: SurfPoint,
    dir0: (i64, i64),
    /// True until the ray has advanced; lets a pole launch cross the
    /// boundary it sits on without being blocked by its own vertex.
    launching: bool,
}

enum StepOutcome {
    Continue,
    Done(TraceResult),
}

impl Tracer<'_> {
    fn run(&mut self) -> TraceResult {
        loop {
            let h = rat_int(self.t.height(self.ci) as i64);
            let on_top = self.y.is_zero();
            let on_bottom = self.y == h;
            let step = if self.q == 0 {
                if on_top || on_bottom {
                    self.ride_boundary()
                } else {
                    self.horizontal_interior()
                }
            } else if (on_top && self.q < 0) || (on_bottom && self.q > 0) {
                // Outward-pointing boundary state: only a launch can be
                // here; arrivals transport inward before the loop resumes.
                debug_assert!(self.launching, "mid-trace states point inward");
                self.depart_boundary();
                StepOutcome::Continue
            } else {
                self.advance_to_boundary(&h)
            };
            match step {
                StepOutcome::Continue => {}
                StepOutcome::Done(res) => return res,
            }
        }
    }

    fn w_int(&self) -> u64 {
        self.t.width(self.ci)
    }

    fn w(&self) -> Rational {
        rat_int(self.w_int() as i64)
    }

    fn here(&self) -> SurfPoint {
        SurfPoint { cyl: self.ci, x: self.x.clone(), y: self.y.clone() }
    }

    fn segment(&self) -> Segment {
        Segment {
            start: self.start.clone(),
            direction: self.dir0,
            length: self.len.clone(),
            crossings: self.crossings.clone(),
        }
    }

    fn advance(&mut self, s: &Rational) {
        self.x = rat_mod_pos(&(&self.x + s * rat_int(self.p)), &self.w());
        self.y = &self.y + s * rat_int(self.q);
        self.len = &self.len + s;
        self.launching = false;
    }

    fn remaining(&self) -> Rational {
        &self.cap - &self.len
    }

    /// First hit of a target description strictly within `(0, s_max]` along
    /// the current chart motion.
    fn target_hit(&self, s_max: &Rational) -> Option<Rational> {
        let w = self.w();
        let mut best: Option<Rational> = None;
        for tgt in &self.targets {
            if tgt.cyl != self.ci {
                continue;
            }
            let s = if self.q != 0 {
                let s = (&tgt.y - &self.y) / rat_int(self.q);
                if !s.is_positive() || s > *s_max {
                    continue;
                }
                let dx = &self.x + &s * rat_int(self.p) - &tgt.x;
                if !(dx / &w).is_integer() {
                    continue;
                }
                s
            } else {
                if tgt.y != self.y {
                    continue;
                }
                let mut s = rat_mod_pos(&((&tgt.x - &self.x) * rat_int(self.p)), &w);
                if s.is_zero() {
                    s = w.clone();
                }
                if s > *s_max {
                    continue;
                }
                s
            };
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
        best
    }

    fn reached(&mut self, s: &Rational) -> StepOutcome {
        self.advance(s);
        StepOutcome::Done(TraceResult::ReachedTarget { at: self.here(), segment: self.segment() })
    }

    fn exhausted(&mut self, s: &Rational) -> StepOutcome {
        self.advance(s);
        StepOutcome::Done(TraceResult::ExhaustedLength { at: self.here(), segment: self.segment() })
    }

    /// Interior advance of a ray with q ≠ 0 up to the boundary ahead.
    fn advance_to_boundary(&mut self, h: &Rational) -> StepOutcome {
        let s_boundary = if self.q > 0 {
            (h - &self.y) / rat_int(self.q)
        } else {
            -&self.y / rat_int(self.q)
        };
        debug_assert!(s_boundary.is_positive());
        let s_stop = self.remaining();
        if !s_stop.is_positive() {
            return self.exhausted(&Rational::zero());
        }
        let s_max = s_boundary.clone().min(s_stop.clone());
        if let Some(s) = self.target_hit(&s_max) {
            return self.reached(&s);
        }
        if s_stop < s_boundary {
            return self.exhausted(&s_stop);
        }
        self.advance(&s_boundary);
        if self.x.is_integer() {
            let class = self.t.vertex_class_at(self.ci, int_of(&self.x), int_of(&self.y));
            if class != VertexClass::Regular {
                return StepOutcome::Done(TraceResult::HitSingularity {
                    at: self.here(),
                    segment: self.segment(),
                });
            }
        }
        self.depart_boundary();
        StepOutcome::Continue
    }

    /// Transport the outward-pointing boundary state across its gluing and
    /// record the crossing.  At a vertex position the edge on the side the
    /// direction leans toward is used (ties toward the forward edge).
    fn depart_boundary(&mut self) {
        let w_int = self.w_int();
        let side = if self.y.is_zero() { Side::Top } else { Side::Bottom };
        let (col, f) = if self.x.is_integer() {
            let xi = int_of(&self.x);
            if self.p >= 0 {
                (xi % w_int, Rational::zero())
            } else {
                ((xi + w_int - 1) % w_int, Rational::one())
            }
        } else {
            let col = int_of(&self.x.floor());
            let f = &self.x - rat_int(col as i64);
            (col, f)
        };
        let (cj, x2, y2, p2, q2) = cross(self.t, self.ci, col, side, &f, self.p, self.q);
        self.ci = cj;
        self.x = x2;
        self.y = y2;
        self.p = p2;
        self.q = q2;
        debug_assert!(
            (self.y.is_zero() && self.q > 0) || (!self.y.is_zero() && self.q < 0),
            "transported rays point into the entered chart"
        );
        self.crossings.push(Crossing {
            point: self.here(),
            direction: (self.p, self.q),
            length: self.len.clone(),
        });
    }

    /// One step of a ray riding a boundary (q = 0, y on the boundary): move
    /// to the next integral position, checking targets on the way and
    /// classifying the vertex there.
    fn ride_boundary(&mut self) -> StepOutcome {
        debug_assert!(self.p == 1 || self.p == -1);
        let s_step = if self.p > 0 {
            self.x.floor() + Rational::one() - &self.x
        } else if self.x.is_integer() {
            Rational::one()
        } else {
            &self.x - self.x.floor()
        };
        let s_stop = self.remaining();
        if !s_stop.is_positive() {
            return self.exhausted(&Rational::zero());
        }
        let s_max = s_step.clone().min(s_stop.clone());
        if let Some(s) = self.target_hit(&s_max) {
            return self.reached(&s);
        }
        if s_stop < s_step {
            return self.exhausted(&s_stop);
        }
        self.advance(&s_step);
        debug_assert!(self.x.is_integer());
        let class = self.t.vertex_class_at(self.ci, int_of(&self.x), int_of(&self.y));
        if class != VertexClass::Regular {
            return StepOutcome::Done(TraceResult::HitSingularity {
                at: self.here(),
                segment: self.segment(),
            });
        }
        self.crossings.push(Crossing {
            point: self.here(),
            direction: (self.p, self.q),
            length: self.len.clone(),
        });
        StepOutcome::Continue
    }

    /// A horizontal ray strictly inside a cylinder never meets a vertex: it
    /// either reaches a target on this level or wraps forever, so it
    /// resolves in one step.
    fn horizontal_interior(&mut self) -> StepOutcome {
        let s_stop = self.remaining();
        if !s_stop.is_positive() {
            return self.exhausted(&Rational::zero());
        }
        if let Some(s) = self.target_hit(&s_stop) {
            return self.reached(&s);
        }
        self.exhausted(&s_stop)
    }
}
