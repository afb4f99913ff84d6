//! Ready-made embeddings: the free product `Z_n * Z_m` and the dyadic
//! triangle groups `D_n *_{Z_2} Z_{2m}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::admissibility::EmbeddingSpec;
use crate::bt_tree::{apartment_distance, ProjPoint, SubtreeTruncation, Vertex};
use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::padic::{multiplicative_order, FieldSpec};
use crate::pgl2::{generate_group, Order, Pgl2, ORDER_BOUND};
use crate::tree_of_groups::{FiniteGroup, TreeBuilder};

/// Stored digits used by the gallery fields.
pub const GALLERY_PRECISION: u32 = 40;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(what()))
    }
}

fn has_order(g: &Pgl2, n: u64) -> Result<bool> {
    Ok(g.order(ORDER_BOUND)? == Order::Finite(n))
}

fn has_fixed_points(g: &Pgl2, expected: &[&ProjPoint]) -> Result<bool> {
    let fp = g.fixed_points()?;
    Ok(fp.len() == expected.len() && expected.iter().all(|z| fp.iter().any(|w| w.same(z))))
}

/// The field with both `zeta_n` and `zeta_m`: f is the lcm of the orders of p.
fn field_for(p: u64, orders: &[u64], e: u32, precision: u32) -> Result<FieldSpec> {
    let mut f = 1u32;
    for &n in orders {
        let o = multiplicative_order(p, n).ok_or(Error::NoRootOfUnity { n, suggested_f: None })?;
        f = f.lcm(&o);
    }
    FieldSpec::new(p, f, e, precision)
}

/// One vertex carrying `Z_n = <diag(zeta_n, 1)>` at the standard vertex, with
/// rays toward 0 and infinity. The smallest admissible embedding.
pub fn cyclic_vertex(p: u64, n: u64) -> Result<EmbeddingSpec> {
    check(n >= 2 && !n.is_multiple_of(p), || format!("need n >= 2 prime to p = {p}, got {n}"))?;
    let k = field_for(p, &[n], 1, GALLERY_PRECISION)?;
    let g = Pgl2::new(Mat2::diag(k.root_of_unity(n)?, k.one()))?;
    let zn = FiniteGroup::cyclic(n as usize)?;
    let tree = TreeBuilder::new()
        .vertex("v", zn.clone())
        .ray("v_0", "v", zn.clone(), &["g"])?
        .ray("v_inf", "v", zn, &["g"])?
        .finish();
    let positions = BTreeMap::from([("v".to_string(), Vertex::standard(&k))]);
    let generators = BTreeMap::from([("v".to_string(), vec![g])]);
    let ends = vec![ProjPoint::finite(k.zero()), ProjPoint::infinity(&k)];
    EmbeddingSpec::new(&k, tree, &positions, &generators, ends)
}

/// A `Z_n` vertex and a `Z_m` vertex joined by a trivial segment of length
/// `2r`, with two rays at each.
pub fn free_product(p: u64, n: u64, m: u64, r: u32) -> Result<EmbeddingSpec> {
    free_product_at(p, n, m, r, GALLERY_PRECISION)
}

pub fn free_product_at(p: u64, n: u64, m: u64, r: u32, precision: u32) -> Result<EmbeddingSpec> {
    check(n >= 2 && m >= 2, || format!("need n, m >= 2, got n = {n}, m = {m}"))?;
    check(r >= 1, || "the horizontal segment needs r >= 1".into())?;
    check(!(n * m).is_multiple_of(p), || {
        format!("p = {p} divides n m = {}; the modified horizontal groups for this case are not built", n * m)
    })?;
    let k = field_for(p, &[n, m], 1, precision)?;
    let zn = k.root_of_unity(n)?;
    let zm = k.root_of_unity(m)?;
    let pr = k.pi_pow(i64::from(r));
    let pr_inv = k.pi_pow(-i64::from(r));
    let one = k.one();
    let gamma = Pgl2::new(Mat2::new(&zn * &pr, k.zero(), &zn - &one, pr.clone())?)?;
    let delta = Pgl2::new(Mat2::new(zm.clone(), -&(&(&zm - &one) * &pr_inv), k.zero(), one.clone())?)?;

    let (z0, zpr, zpr_inv, inf) = (
        ProjPoint::finite(k.zero()),
        ProjPoint::finite(pr.clone()),
        ProjPoint::finite(pr_inv.clone()),
        ProjPoint::infinity(&k),
    );
    check(has_order(&gamma, n)?, || format!("gamma does not have order {n}"))?;
    check(has_order(&delta, m)?, || format!("delta does not have order {m}"))?;
    check(has_fixed_points(&gamma, &[&z0, &zpr])?, || "gamma must fix 0 and pi^r".into())?;
    check(has_fixed_points(&delta, &[&zpr_inv, &inf])?, || "delta must fix pi^-r and infinity".into())?;
    let dist = apartment_distance((&z0, &zpr), (&zpr_inv, &inf))?;
    check(dist == 2 * u64::from(r), || format!("mirror distance {dist}, expected {}", 2 * r))?;

    let zn_group = FiniteGroup::cyclic(n as usize)?;
    let zm_group = FiniteGroup::cyclic(m as usize)?;
    let trivial = FiniteGroup::cyclic(1)?;
    let mut b = TreeBuilder::new().vertex("u", zn_group.clone());
    let mut positions = BTreeMap::new();
    let r = i64::from(r);
    positions.insert("u".to_string(), Vertex::new(r, &k.zero())?);
    let mut prev = "u".to_string();
    for i in 1..2 * r {
        let id = format!("h{i}");
        b = b.vertex(&id, trivial.clone()).edge(&prev, &id, trivial.clone(), &[], &[])?;
        positions.insert(id.clone(), Vertex::new(r - i, &k.zero())?);
        prev = id;
    }
    b = b.vertex("w", zm_group.clone()).edge(&prev, "w", trivial, &[], &[])?;
    positions.insert("w".to_string(), Vertex::new(-r, &k.zero())?);
    let tree = b
        .ray("u_0", "u", zn_group.clone(), &["g"])?
        .ray("u_pi^r", "u", zn_group, &["g"])?
        .ray("w_pi^-r", "w", zm_group.clone(), &["g"])?
        .ray("w_inf", "w", zm_group, &["g"])?
        .finish();
    let generators = BTreeMap::from([("u".to_string(), vec![gamma]), ("w".to_string(), vec![delta])]);
    EmbeddingSpec::new(&k, tree, &positions, &generators, vec![z0, zpr, zpr_inv, inf])
}

/// The three matrices of the triangle construction.
#[derive(Debug, Clone)]
pub struct TriangleGenerators {
    pub rotation: Pgl2,
    pub reflection: Pgl2,
    /// Order `2m`, with `theta^m` the reflection.
    pub theta: Pgl2,
}

fn check_triangle_params(n: u64, m: u64, e: u32) -> Result<()> {
    check(n >= 3 && n % 2 == 1, || format!("n must be odd and at least 3, got {n}"))?;
    check(m >= 1 && m % 2 == 1, || {
        format!("m must be odd, got {m}; the even case needs modified groups on the connecting segment")
    })?;
    check(e >= 1, || "ramification e must be at least 1".into())
}

pub fn triangle_field(n: u64, m: u64, e: u32, precision: u32) -> Result<FieldSpec> {
    check_triangle_params(n, m, e)?;
    field_for(2, &[n, m], e, precision)
}

pub fn triangle_generators(k: &FieldSpec, n: u64, m: u64) -> Result<TriangleGenerators> {
    check(k.p() == 2, || "the triangle construction needs p = 2; for odd p the two mirrors meet".into())?;
    let zn = k.root_of_unity(n)?;
    let zm = k.root_of_unity(m)?;
    let rotation = Pgl2::new(Mat2::diag(zn, k.one()))?;
    let reflection = Pgl2::new(Mat2::from_ints(k, [[0, 1], [1, 0]]))?;
    // conjugate diag(-zeta_m, 1) by z -> (z - 1)/(z + 1), which sends 1, -1 to 0, infinity
    let h = Pgl2::new(Mat2::from_ints(k, [[1, -1], [1, 1]]))?;
    let h_inv = Pgl2::new(Mat2::from_ints(k, [[1, 1], [-1, 1]]))?;
    let theta = h_inv.mul(&Pgl2::new(Mat2::diag(-&zm, k.one()))?).mul(&h);
    check(has_order(&rotation, n)?, || format!("rotation does not have order {n}"))?;
    check(has_order(&theta, 2 * m)?, || format!("theta does not have order {}", 2 * m))?;
    check(theta.pow(m as i64).same(&reflection), || "theta^m differs from the reflection".into())?;
    let fp_theta = theta.fixed_points()?;
    let fp_chi = reflection.fixed_points()?;
    check(fp_theta.iter().all(|z| fp_chi.iter().any(|w| w.same(z))), || "theta and the reflection have different mirrors".into())?;
    Ok(TriangleGenerators { rotation, reflection, theta })
}

/// The dyadic triangle construction: `D_n` at the standard vertex, a `Z_2`
/// segment of length `e` down to the reflection mirror, and `Z_{2m}` along it.
pub fn triangle_dyadic(n: u64, m: u64, e: u32) -> Result<EmbeddingSpec> {
    triangle_dyadic_at(n, m, e, GALLERY_PRECISION)
}

pub fn triangle_dyadic_at(n: u64, m: u64, e: u32, precision: u32) -> Result<EmbeddingSpec> {
    let k = triangle_field(n, m, e, precision)?;
    let g = triangle_generators(&k, n, m)?;
    let dn = FiniteGroup::dihedral(n as usize)?;
    let z2 = FiniteGroup::cyclic(2)?;
    let z2m = FiniteGroup::cyclic(2 * m as usize)?;
    let top = if m == 1 { "g".to_string() } else { format!("g^{m}") };
    let one = k.one();
    let mut positions = BTreeMap::from([("v0".to_string(), Vertex::standard(&k))]);
    let mut generators = BTreeMap::from([("v0".to_string(), vec![g.rotation.clone(), g.reflection.clone()])]);
    let mut b = TreeBuilder::new().vertex("v0", dn.clone());
    let mut prev = "v0".to_string();
    for i in 1..e {
        let id = format!("c{i}");
        b = b.vertex(&id, z2.clone());
        let into_prev = if prev == "v0" { "s" } else { "g" };
        b = b.edge(&prev, &id, z2.clone(), &[into_prev], &["g"])?;
        positions.insert(id.clone(), Vertex::new(i64::from(i), &one)?);
        generators.insert(id.clone(), vec![g.reflection.clone()]);
        prev = id;
    }
    b = b.vertex("v1", z2m.clone());
    let into_prev = if prev == "v0" { "s" } else { "g" };
    b = b.edge(&prev, "v1", z2, &[into_prev], &[top.as_str()])?;
    positions.insert("v1".to_string(), Vertex::new(i64::from(e), &one)?);
    generators.insert("v1".to_string(), vec![g.theta.clone()]);
    let tree = b
        .ray("v0_inf", "v0", FiniteGroup::cyclic(n as usize)?, &["r"])?
        .ray("v1_1", "v1", z2m.clone(), &["g"])?
        .ray("v1_-1", "v1", z2m, &["g"])?
        .finish();
    let ends = vec![ProjPoint::infinity(&k), ProjPoint::finite(one.clone()), ProjPoint::finite(-&one)];
    EmbeddingSpec::new(&k, tree, &positions, &generators, ends)
}

/// The decorated fundamental domain of the dihedral group: the half-line
/// toward infinity, the reflection mirror, and the segment joining them.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalDomain {
    #[serde(skip)]
    pub tree: SubtreeTruncation,
    /// Vertex label to group name, computed from the actual stabilizers.
    pub labels: BTreeMap<String, String>,
    pub mirror_distance: u64,
    pub radius: u64,
}

pub fn dihedral_fundamental_domain(n: u64, e: u32, radius: u64) -> Result<FundamentalDomain> {
    let k = triangle_field(n, 1, e, GALLERY_PRECISION)?;
    let g = triangle_generators(&k, n, 1)?;
    let (zero, inf) = (ProjPoint::finite(k.zero()), ProjPoint::infinity(&k));
    let (plus, minus) = (ProjPoint::finite(k.one()), ProjPoint::finite(-&k.one()));
    let mirror_distance = apartment_distance((&zero, &inf), (&plus, &minus))?;
    check(mirror_distance == u64::from(e), || format!("mirror distance {mirror_distance}, expected {e}"))?;
    let v0 = Vertex::standard(&k);
    let v1 = Vertex::new(i64::from(e), &k.one())?;
    let mut tree = SubtreeTruncation { radius, center: Some(v0.clone()), ..Default::default() };
    let mut up = vec![v0.clone()];
    up.extend(inf.halfline(&v0, radius)?);
    tree.insert_path(&up);
    tree.insert_path(&v0.geodesic(&v1));
    for z in [&plus, &minus] {
        let mut down = vec![v1.clone()];
        down.extend(z.halfline(&v1, radius)?);
        tree.insert_path(&down);
    }
    let group = generate_group(&[g.rotation.clone(), g.reflection.clone()], &k, 4 * n as usize)
        .ok_or_else(|| Error::InvalidInput("dihedral group did not close".into()))?;
    let mut labels = BTreeMap::new();
    for v in &tree.vertices {
        let stab: Vec<&Pgl2> = group.iter().filter(|h| h.fixes(v).unwrap_or(false)).collect();
        let name = match stab.len() {
            x if x == 2 * n as usize => format!("D_{n}"),
            1 => "1".to_string(),
            x => format!("Z_{x}"),
        };
        labels.insert(v.label(), name);
    }
    Ok(FundamentalDomain { tree, labels, mirror_distance, radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_product_specs() {
        for (p, n, m) in [(3, 2, 2), (5, 2, 4), (2, 3, 3)] {
            let s = free_product(p, n, m, 1).unwrap();
            assert_eq!(s.expanded().vertices.len(), 3);
            assert_eq!(s.core_diameter(), 2);
        }
        assert!(free_product(3, 3, 2, 1).is_err());
        assert!(free_product(3, 2, 2, 0).is_err());
    }

    #[test]
    fn triangle_specs() {
        for (n, m, e) in [(3, 1, 1), (3, 3, 1), (5, 3, 1), (3, 1, 2)] {
            let s = triangle_dyadic(n, m, e).unwrap();
            assert_eq!(s.expanded().vertices.len(), 1 + e as usize);
        }
        assert!(triangle_dyadic(4, 1, 1).is_err());
        assert!(triangle_dyadic(3, 2, 1).is_err());
    }

    #[test]
    fn fundamental_domain_labels() {
        for e in [1, 2] {
            let fd = dihedral_fundamental_domain(3, e, 3).unwrap();
            assert_eq!(fd.mirror_distance, u64::from(e));
            assert_eq!(fd.labels["(0; 0)"], "D_3");
            assert_eq!(fd.labels["(-1; 0)"], "Z_3");
            let segment: Vec<&String> =
                fd.labels.iter().filter(|(k, _)| k.ends_with("; 1)")).map(|(_, v)| v).collect();
            assert!(segment.iter().all(|l| *l == "Z_2"));
        }
    }
}
