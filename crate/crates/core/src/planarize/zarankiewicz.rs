use crate::drawing::{shear_to_general_position, Drawing};
use crate::error::{Error, Result};
use crate::generators::k3n;
use crate::geometry::Point;
use crate::par::Execution;

/// `floor(n/2) * floor((n-1)/2)`.
pub fn cr_pair_k3n(n: usize) -> usize {
    (n / 2) * (n.saturating_sub(1) / 2)
}

/// Straight-line drawing of `K_{3,n}` with `cr_pair_k3n(n)` crossings.
///
/// Side A (`0, 1, 2`) sits on the y-axis at heights 1, 2 and -1; side B
/// (`3..3+n`) on the x-axis at `-floor(n/2)..-1` and `1..ceil(n/2)`, in
/// increasing x. Two B vertices cross once iff they are on the same side of
/// the origin. The shared x-coordinate of side A is removed by a small shear.
/// Three pairwise crossing edges would need three distinct endpoints above
/// the axis on each side, so no triple point can arise.
pub fn zarankiewicz_k3n(n: usize) -> Result<Drawing> {
    if n == 0 {
        return Err(Error::invalid("K_{3,n} needs n >= 1"));
    }
    let g = k3n(n)?;
    let half = (n / 2) as i64;
    let mut pos = vec![Point::int(0, 1), Point::int(0, 2), Point::int(0, -1)];
    pos.extend((-half..0).map(|x| Point::int(x, 0)));
    pos.extend((1..=(n as i64 - half)).map(|x| Point::int(x, 0)));
    let d = Drawing::new(g, pos)?;
    Ok(shear_to_general_position(&d, Execution::default())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{check_general_position, crossing_graph, crossings, planarize_drawing};

    #[test]
    fn formula_values() {
        assert_eq!(cr_pair_k3n(1), 0);
        assert_eq!(cr_pair_k3n(2), 0);
        assert_eq!(cr_pair_k3n(3), 1);
        assert_eq!(cr_pair_k3n(6), 6);
        assert_eq!(cr_pair_k3n(11), 25);
    }

    #[test]
    fn drawing_meets_formula() {
        for n in 1..=16 {
            let d = zarankiewicz_k3n(n).unwrap();
            assert!(check_general_position(&d).is_ok(), "n = {n}");
            assert_eq!(crossings(&d).unwrap().len(), cr_pair_k3n(n), "n = {n}");
        }
    }

    #[test]
    fn fig4() {
        let d = zarankiewicz_k3n(11).unwrap();
        let p = planarize_drawing(&d).unwrap();
        assert_eq!(p.planar.n(), 14 + 25);
        assert!(p.is_planar());
        let cg = crossing_graph(&d).unwrap();
        assert_eq!((cg.n(), cg.m()), (33, 25));
        assert_eq!(
            crossing_graph(&zarankiewicz_k3n(6).unwrap()).unwrap().m(),
            6
        );
    }
}
