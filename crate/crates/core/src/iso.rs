//! Isomorphism testing for small loops and deduplication into classes.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::table::{Elem, LoopTable};

pub const ISOMORPHISM_ORDER_LIMIT: usize = 8;
pub const DEDUP_ORDER_LIMIT: usize = 6;

/// Isomorphism invariant of an element: cycle types of `L_x` and `R_x`.
type Fingerprint = (Vec<usize>, Vec<usize>);

fn fingerprints(q: &LoopTable) -> Vec<Fingerprint> {
    q.elements()
        .map(|x| {
            (
                q.left_translation(x).cycle_type(),
                q.right_translation(x).cycle_type(),
            )
        })
        .collect()
}

/// Sorted multiset of element fingerprints; equal for isomorphic loops.
fn signature(q: &LoopTable) -> Vec<Fingerprint> {
    let mut f = fingerprints(q);
    f.sort();
    f
}

fn check_order(a: &LoopTable) -> Result<()> {
    if a.order() > ISOMORPHISM_ORDER_LIMIT {
        return Err(Error::OrderCap {
            what: "isomorphism testing",
            order: a.order(),
            limit: ISOMORPHISM_ORDER_LIMIT,
        });
    }
    Ok(())
}

/// An isomorphism `f` with `f(xy) = f(x)f(y)`, as a permutation.
pub fn find_isomorphism(a: &LoopTable, b: &LoopTable) -> Result<Option<Perm>> {
    check_order(a)?;
    check_order(b)?;
    if a.order() != b.order() {
        return Ok(None);
    }
    let fa = fingerprints(a);
    let fb = fingerprints(b);
    let mut sorted_a = fa.clone();
    let mut sorted_b = fb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }

    let n = a.order();
    let mut map: Vec<Option<Elem>> = vec![None; n];
    let mut used = vec![false; n];
    map[0] = Some(0);
    used[0] = true;

    fn consistent(a: &LoopTable, b: &LoopTable, map: &[Option<Elem>], x: Elem) -> bool {
        let n = a.order();
        (0..n).all(|y| {
            let Some(fy) = map[y] else { return true };
            let fx = map[x].expect("x is mapped");
            [(x, y, fx, fy), (y, x, fy, fx)]
                .iter()
                .all(|&(p, q, fp, fq)| {
                    match map[a.mul(p, q)] {
                        Some(fpq) => fpq == b.mul(fp, fq),
                        None => {
                            // the image of pq is forced and must still be free
                            let target = b.mul(fp, fq);
                            !map.contains(&Some(target))
                        }
                    }
                })
        })
    }

    fn search(
        a: &LoopTable,
        b: &LoopTable,
        fa: &[Fingerprint],
        fb: &[Fingerprint],
        x: Elem,
        map: &mut Vec<Option<Elem>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.order();
        if x == n {
            return true;
        }
        for y in 1..n {
            if used[y] || fa[x] != fb[y] {
                continue;
            }
            map[x] = Some(y);
            used[y] = true;
            if consistent(a, b, map, x) && search(a, b, fa, fb, x + 1, map, used) {
                return true;
            }
            map[x] = None;
            used[y] = false;
        }
        false
    }

    if search(a, b, &fa, &fb, 1, &mut map, &mut used) {
        let images = map.into_iter().map(|m| m.expect("complete map"));
        Ok(Some(Perm::from_images(images)?))
    } else {
        Ok(None)
    }
}

pub fn are_isomorphic(a: &LoopTable, b: &LoopTable) -> Result<bool> {
    find_isomorphism(a, b).map(|f| f.is_some())
}

/// Groups `tables` into isomorphism classes. Each class is reported with its
/// lexicographically least member and its size; classes are sorted by
/// representative.
pub fn dedup_classes<I>(tables: I) -> Result<Vec<(LoopTable, usize)>>
where
    I: IntoIterator<Item = LoopTable>,
{
    let mut classes: Vec<(LoopTable, usize)> = Vec::new();
    let mut by_signature: HashMap<Vec<Fingerprint>, Vec<usize>> = HashMap::new();
    for q in tables {
        if q.order() > DEDUP_ORDER_LIMIT {
            return Err(Error::OrderCap {
                what: "isomorphism class deduplication",
                order: q.order(),
                limit: DEDUP_ORDER_LIMIT,
            });
        }
        let bucket = by_signature.entry(signature(&q)).or_default();
        let mut home = None;
        for &i in bucket.iter() {
            if are_isomorphic(&classes[i].0, &q)? {
                home = Some(i);
                break;
            }
        }
        match home {
            Some(i) => {
                let class = &mut classes[i];
                class.1 += 1;
                if q < class.0 {
                    class.0 = q;
                }
            }
            None => {
                bucket.push(classes.len());
                classes.push((q, 1));
            }
        }
    }
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::all_loops;
    use crate::fixtures::{builtin_table, example1};

    /// Oracle: try every identity-fixing bijection.
    fn brute_isomorphic(a: &LoopTable, b: &LoopTable) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            let mut out = vec![vec![0]];
            for k in 1..n {
                out = out
                    .into_iter()
                    .flat_map(|p| {
                        (1..=k).map(move |pos| {
                            let mut q = p.clone();
                            q.insert(pos, k);
                            q
                        })
                    })
                    .collect();
            }
            out
        }
        let n = a.order();
        perms(n)
            .iter()
            .any(|f| (0..n).all(|x| (0..n).all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y]))))
    }

    #[test]
    fn reflexive_and_distinguishes_small_groups() {
        let q = example1();
        assert!(are_isomorphic(&q, &q).unwrap());
        let c4 = builtin_table("cyclic", Some(4)).unwrap();
        let v4 = builtin_table("klein4", None).unwrap();
        assert!(!are_isomorphic(&c4, &v4).unwrap());
        let c8 = builtin_table("cyclic", Some(8)).unwrap();
        let q8 = builtin_table("quaternion8", None).unwrap();
        assert!(!are_isomorphic(&c8, &q8).unwrap());
    }

    #[test]
    fn found_map_is_an_isomorphism() {
        let loops = all_loops(5).unwrap();
        for a in loops.iter().take(10) {
            for b in &loops {
                if let Some(f) = find_isomorphism(a, b).unwrap() {
                    for x in a.elements() {
                        for y in a.elements() {
                            assert_eq!(f.apply(a.mul(x, y)), b.mul(f.apply(x), f.apply(y)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_on_order_five() {
        let loops = all_loops(5).unwrap();
        for a in &loops {
            for b in &loops {
                assert_eq!(are_isomorphic(a, b).unwrap(), brute_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn class_counts() {
        let four = dedup_classes(all_loops(4).unwrap()).unwrap();
        assert_eq!(four.len(), 2);
        let five = dedup_classes(all_loops(5).unwrap()).unwrap();
        assert_eq!(five.len(), 6);
        assert_eq!(five.iter().map(|c| c.1).sum::<usize>(), 56);
        let one = dedup_classes(all_loops(1).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        // representatives are least members: the first table is always one
        assert_eq!(five[0].0, all_loops(5).unwrap()[0]);
    }

    #[test]
    fn caps() {
        let big = builtin_table("cyclic", Some(9)).unwrap();
        assert!(are_isomorphic(&big, &big).is_err());
        let seven = builtin_table("cyclic", Some(7)).unwrap();
        assert!(dedup_classes([seven]).is_err());
    }
}
