use num_bigint::BigInt;

use super::{PlanarizationReport, Witness};
use crate::arrangement::{edge_separation, LinearArrangement};
use crate::drawing::{
    check_general_position_with, planarize_drawing_full, shear_to_general_position, x_order,
    Drawing,
};
use crate::error::{Error, Result};
use crate::geometry::{Point, Q};
use crate::graph::Graph;
use crate::par::Execution;

const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Places the vertex at position `i` on the convex curve `(i, b^i)`, trying
/// bases until a shear reaches general position. Any three points of the
/// curve turn the same way, so two edges cross iff their endpoints interleave.
pub(super) fn convex_drawing(g: &Graph, position: &[usize], exec: Execution) -> Result<Drawing> {
    let mut last = None;
    for b in BASES {
        let base = BigInt::from(b);
        let pos = position
            .iter()
            .map(|&i| {
                Point::new(
                    Q::from_integer(i.into()),
                    Q::from_integer(base.pow(i as u32)),
                )
            })
            .collect();
        let d = Drawing::new(g.clone(), pos)?;
        match shear_to_general_position(&d, exec) {
            Ok((s, _)) => match check_general_position_with(&s, exec) {
                Ok(()) => return Ok(s),
                Err(v) => last = Some(v.to_string()),
            },
            Err(Error::Degenerate(v)) => last = Some(v.to_string()),
            Err(e) => return Err(e),
        }
    }
    Err(Error::internal(format!(
        "no convex placement reached general position: {}",
        last.unwrap_or_default()
    )))
}

pub fn convex_lift(g: &Graph, a: &LinearArrangement) -> Result<(Drawing, PlanarizationReport)> {
    convex_lift_with(g, a, Execution::default())
}

/// Draws `g` with vertices on a convex curve in the order of `a` and
/// planarizes the drawing. The witness is the x-order of the planarization;
/// a vertical line meets the same edges before and after planarizing, so its
/// edge separation equals that of `a`.
pub fn convex_lift_with(
    g: &Graph,
    a: &LinearArrangement,
    exec: Execution,
) -> Result<(Drawing, PlanarizationReport)> {
    if g.n() == 0 {
        return Err(Error::invalid("convex lift needs at least one vertex"));
    }
    let claimed = edge_separation(g, a)?;
    let position: Vec<usize> = (0..g.n()).map(|v| a.position(v)).collect();
    let drawing = convex_drawing(g, &position, exec)?;
    let (planarization, planar_drawing) = planarize_drawing_full(&drawing, exec)?;
    let witness = x_order(&planar_drawing)?;
    let validated = edge_separation(&planarization.planar, &witness)?;
    let report = PlanarizationReport {
        strategy: "convex".into(),
        crossings_added: planarization.crossings(),
        planarization,
        witness: Witness::Arrangement(witness),
        claimed_width: claimed,
        validated_width: validated,
        routings: Vec::new(),
    };
    Ok((drawing, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{exact_cutwidth, span};
    use crate::generators::*;

    #[test]
    fn path_in_order_has_no_crossings() {
        let g = path(6).unwrap();
        let (_, r) = convex_lift(&g, &LinearArrangement::identity(6)).unwrap();
        assert_eq!(r.crossings_added, 0);
        assert_eq!(r.planarization.planar, g);
        assert_eq!(r.validated_width, 1);
    }

    #[test]
    fn k34_keeps_cutwidth_six() {
        let g = k3n(4).unwrap();
        let (w, a) = exact_cutwidth(&g).unwrap();
        assert_eq!(w, 6);
        let (_, r) = convex_lift(&g, &a).unwrap();
        assert_eq!(r.validated_width, 6);
        assert_eq!(r.claimed_width, 6);
        assert!(r.planarization.is_planar());
        assert_eq!(r.planarization.contract().unwrap(), g);
    }

    #[test]
    fn width_is_preserved_on_random_graphs() {
        for seed in 0..6 {
            let g = random_connected(10, 8, seed).unwrap();
            let a = LinearArrangement::fold(10);
            let (_, r) = convex_lift(&g, &a).unwrap();
            assert_eq!(r.validated_width, edge_separation(&g, &a).unwrap());
        }
    }

    #[test]
    fn crossings_are_interleavings() {
        let g = complete(6).unwrap();
        let (_, r) = convex_lift(&g, &LinearArrangement::identity(6)).unwrap();
        // every 4 points on a convex curve give one crossing
        assert_eq!(r.crossings_added, 15);
        let w = r.witness_arrangement().unwrap();
        assert!(span(&r.planarization.planar, w).unwrap() > 0);
    }
}
