//! Constructors for the fixture corpus and random valid labelings.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::orbifold::OrbifoldComplex;

/// Boundary of the octahedron: one vertex from each antipodal pair
/// `{0,1}`, `{2,3}`, `{4,5}`.
pub fn octahedron() -> SimplicialComplex {
    let mut tris = Vec::with_capacity(8);
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                tris.push([x, y, z]);
            }
        }
    }
    SimplicialComplex::build(&tris).expect("octahedron")
}

/// The 7-vertex torus, triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let mut tris = Vec::with_capacity(14);
    for i in 0..7u32 {
        tris.push([i, (i + 1) % 7, (i + 3) % 7]);
        tris.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::build(&tris).expect("torus")
}

/// Genus-two surface with 11 vertices: two 7-vertex tori with the triangle
/// `{0,1,3}` removed from each, glued along its boundary.
pub fn genus2_connected_sum() -> SimplicialComplex {
    let t = torus7();
    let glued = [0u32, 1, 3];
    let relabel = |v: u32| -> u32 {
        match glued.iter().position(|&g| g == v) {
            Some(_) => v,
            None => 7 + [2u32, 4, 5, 6].iter().position(|&w| w == v).expect("torus vertex") as u32,
        }
    };
    let mut tris = Vec::with_capacity(26);
    for s in t.ids_of_dim(2) {
        let verts = t.vertices(s);
        if verts == glued {
            continue;
        }
        tris.push(verts.to_vec());
        tris.push(verts.iter().map(|&v| relabel(v)).collect());
    }
    SimplicialComplex::build(&tris).expect("connected sum")
}

/// Genus-`g` surface (`g ≥ 2`) from the `4g`-gon with boundary word
/// `a1 b1 a1⁻¹ b1⁻¹ …`: the coned polygon is subdivided twice and its
/// boundary identified, which is simplicial after the second subdivision.
pub fn polygon_surface(genus: u32) -> Result<SimplicialComplex> {
    if genus < 2 {
        return Err(Error::SelfCheck(format!("polygon construction needs genus >= 2, got {genus}")));
    }
    let n = 4 * genus as usize;
    let disc_tris: Vec<[u32; 3]> =
        (0..n).map(|i| [0, 1 + i as u32, 1 + ((i + 1) % n) as u32]).collect();
    let disc = SimplicialComplex::build(&disc_tris)?;
    let sd1 = disc.barycentric_subdivision();
    let sd2 = sd1.barycentric_subdivision();

    // Exact positions in barycentric coordinates over (center, P_0, …, P_{n-1}).
    type Pos = Vec<Ratio<i64>>;
    let average = |points: &mut dyn Iterator<Item = Pos>| -> Pos {
        let mut acc = vec![Ratio::from_integer(0); n + 1];
        let mut k = 0;
        for p in points {
            for (a, x) in acc.iter_mut().zip(p) {
                *a += x;
            }
            k += 1;
        }
        acc.into_iter().map(|a| a / k).collect()
    };
    let unit = |v: u32| -> Pos {
        let mut p = vec![Ratio::from_integer(0); n + 1];
        p[v as usize] = Ratio::from_integer(1);
        p
    };
    let pos1: Vec<Pos> = disc
        .ids()
        .map(|s| average(&mut disc.vertices(s).iter().map(|&v| unit(v))))
        .collect();
    let pos2: Vec<Pos> = sd1
        .ids()
        .map(|s| average(&mut sd1.vertices(s).iter().map(|&v| pos1[v as usize].clone())))
        .collect();

    #[derive(Clone, PartialEq, Eq, Hash)]
    enum Key {
        Interior(u32),
        Corner,
        Side(usize, char, Ratio<i64>),
    }
    let key = |v: u32| -> Key {
        let p = &pos2[v as usize];
        if p[0] != Ratio::from_integer(0) {
            return Key::Interior(v);
        }
        let corners: Vec<usize> = (0..n).filter(|&i| p[1 + i] != Ratio::from_integer(0)).collect();
        match corners[..] {
            [_] => Key::Corner,
            [a, b] => {
                let side = if b == a + 1 { a } else { b };
                let t = p[1 + (side + 1) % n];
                let (k, r) = (side / 4, side % 4);
                let letter = if r % 2 == 0 { 'a' } else { 'b' };
                let s = if r < 2 { t } else { Ratio::from_integer(1) - t };
                Key::Side(k, letter, s)
            }
            _ => unreachable!("boundary point lies on one side"),
        }
    };
    let mut ids: HashMap<Key, u32> = HashMap::new();
    let mut tris = Vec::new();
    for s in sd2.ids_of_dim(2) {
        let tri: Vec<u32> = sd2
            .vertices(s)
            .iter()
            .map(|&v| {
                let next = ids.len() as u32;
                *ids.entry(key(v)).or_insert(next)
            })
            .collect();
        tris.push(tri);
    }
    let expected = tris.len();
    let surface = SimplicialComplex::build(&tris)
        .map_err(|e| Error::SelfCheck(format!("identified polygon is not simplicial: {e}")))?;
    check_closed_surface(&surface, expected, 2 - 2 * genus as i64)?;
    Ok(surface)
}

fn check_closed_surface(c: &SimplicialComplex, triangles: usize, chi: i64) -> Result<()> {
    if c.f_vector().get(2) != Some(&triangles) {
        return Err(Error::SelfCheck("triangles collapsed under identification".into()));
    }
    if c.cofacet_counts().iter().zip(c.ids()).any(|(&k, s)| c.dim(s) == 1 && k != 2) {
        return Err(Error::SelfCheck("not a closed pseudomanifold".into()));
    }
    if c.euler_characteristic() != chi {
        return Err(Error::SelfCheck(format!("Euler characteristic {} != {chi}", c.euler_characteristic())));
    }
    Ok(())
}

/// Closed orientable surface of the given genus: octahedron, 7-vertex torus,
/// or the twice-subdivided identified polygon.
pub fn surface_complex(genus: u32) -> Result<SimplicialComplex> {
    let c = match genus {
        0 => octahedron(),
        1 => torus7(),
        g => polygon_surface(g)?,
    };
    check_closed_surface(&c, c.f_vector()[2], 2 - 2 * genus as i64)?;
    Ok(c)
}

/// Order in which vertices become cone points. On the octahedron the two
/// poles come first so that two cone points are antipodal.
fn cone_vertex_order(genus: u32, vertex_count: u32) -> Vec<u32> {
    if genus == 0 {
        vec![4, 5, 0, 1, 2, 3]
    } else {
        (0..vertex_count).collect()
    }
}

/// A closed genus-`g` surface with cone points of the given orders.
pub fn surface_orbifold(genus: u32, cone_orders: &[u32]) -> Result<OrbifoldComplex> {
    if let Some(&m) = cone_orders.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidOrder { order: m, min: 2 });
    }
    let complex = surface_complex(genus)?;
    let slots = cone_vertex_order(genus, complex.vertex_count());
    if cone_orders.len() > slots.len() {
        return Err(Error::TooManyConePoints { requested: cone_orders.len(), available: slots.len() });
    }
    let mut oc = OrbifoldComplex::trivial(complex);
    for (&v, &m) in slots.iter().zip(cone_orders) {
        let s = oc.complex().find(&[v]).expect("cone vertex exists");
        oc.set_order(s, m)?;
    }
    Ok(oc)
}

/// The product `oc × plain`, triangulated by staircases. A product simplex
/// takes the order of its projection to the orbifold factor, which is the
/// simplex whose open stratum contains the projection of its interior.
pub fn product_with_manifold(oc: &OrbifoldComplex, plain: &SimplicialComplex) -> Result<OrbifoldComplex> {
    let k = oc.complex();
    if k.is_empty() || plain.is_empty() {
        return Err(Error::EmptyFactor);
    }
    let nl = plain.vertex_count();
    let mut maximal: Vec<Vec<u32>> = Vec::new();
    for &s in &k.maximal_simplices() {
        for &t in &plain.maximal_simplices() {
            staircases(k.vertices(s), plain.vertices(t), nl, &mut maximal);
        }
    }
    let vertex_count = k
        .vertex_count()
        .checked_mul(nl)
        .ok_or_else(|| Error::Format("product has too many vertices".into()))?;
    let product = SimplicialComplex::build_with_vertex_count(vertex_count, &maximal)?;
    let mut out = OrbifoldComplex::trivial(product);
    let p = out.complex().clone();
    let mut proj: Vec<u32> = Vec::new();
    for s in p.ids() {
        let verts = p.vertices(s);
        proj.clear();
        proj.extend(verts.iter().map(|&v| v / nl));
        proj.dedup();
        let base = k.find(&proj).expect("projection is a simplex of the base");
        out.set_order(s, oc.order(base))?;
        if verts.len() < 2 {
            continue;
        }
        // Dropping the only vertex over some base vertex restricts along the base facet.
        for j in 0..verts.len() {
            let a = verts[j] / nl;
            let shared = verts.iter().enumerate().any(|(i, &v)| i != j && v / nl == a);
            if !shared {
                let pos = proj.iter().position(|&x| x == a).expect("projected vertex");
                out.set_unit(s, j, oc.unit(base, pos));
            }
        }
    }
    Ok(out)
}

/// Appends the `C(p+q, p)` monotone lattice-path simplices of `σ × τ`.
fn staircases(a: &[u32], b: &[u32], nl: u32, out: &mut Vec<Vec<u32>>) {
    let (p, q) = (a.len() - 1, b.len() - 1);
    let steps = p + q;
    for mask in 0u32..(1 << steps) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut simplex = Vec::with_capacity(steps + 1);
        simplex.push(a[i] * nl + b[j]);
        for step in 0..steps {
            if mask & (1 << step) != 0 {
                i += 1;
            } else {
                j += 1;
            }
            simplex.push(a[i] * nl + b[j]);
        }
        out.push(simplex);
    }
}

/// Side-by-side union; the vertices of `b` are shifted past those of `a`.
pub fn disjoint_union(a: &OrbifoldComplex, b: &OrbifoldComplex) -> OrbifoldComplex {
    if b.complex().is_empty() {
        return a.clone();
    }
    if a.complex().is_empty() {
        return b.clone();
    }
    let (ca, cb) = (a.complex(), b.complex());
    let shift = ca.vertex_count();
    let mut maximal: Vec<Vec<u32>> =
        ca.maximal_simplices().iter().map(|&s| ca.vertices(s).to_vec()).collect();
    maximal.extend(cb.maximal_simplices().iter().map(|&s| cb.vertices(s).iter().map(|v| v + shift).collect()));
    let union = SimplicialComplex::build_with_vertex_count(shift + cb.vertex_count(), &maximal)
        .expect("union of nonempty complexes");
    let mut out = OrbifoldComplex::trivial(union);
    let mut scratch = Vec::new();
    for s in out.complex().clone().ids() {
        let verts = out.complex().vertices(s);
        let (src, id) = if verts[0] < shift {
            (a, ca.find(verts).expect("simplex of a"))
        } else {
            scratch.clear();
            scratch.extend(verts.iter().map(|v| v - shift));
            (b, cb.find(&scratch).expect("simplex of b"))
        };
        out.orders_mut()[s.index()] = src.order(id);
        for j in 0..src.complex().facets(id).len() {
            let u = src.unit(id, j);
            out.set_unit(s, j, u);
        }
    }
    out
}

/// A 3-vertex circle with every order `m` and the restriction from edge
/// `[0,2]` to vertex `[0]` carrying `unit`; the other restrictions are identities.
pub fn circle_with_monodromy(order: u32, unit: u32) -> Result<OrbifoldComplex> {
    if order == 0 {
        return Err(Error::InvalidOrder { order, min: 1 });
    }
    if !crate::orbifold::unit_in_range(unit, order) {
        return Err(Error::InvalidUnit { unit, order });
    }
    let c = SimplicialComplex::build(&[[0, 1], [1, 2], [0, 2]])?;
    let mut oc = OrbifoldComplex::trivial(c);
    for s in oc.complex().clone().ids() {
        oc.set_order(s, order)?;
    }
    oc.set_restriction(&[0, 2], &[0], unit)?;
    Ok(oc)
}

/// Bounds for [`random_orbifold`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomProfile {
    /// 2 (surfaces) or 4 (products of surfaces).
    pub dim: usize,
    pub max_vertices: u32,
    pub max_order: u32,
}

impl Default for RandomProfile {
    fn default() -> Self {
        RandomProfile { dim: 2, max_vertices: 64, max_order: 6 }
    }
}

impl RandomProfile {
    pub fn four_dim() -> Self {
        RandomProfile { dim: 4, max_vertices: 64, max_order: 6 }
    }
}

/// Width of the second factor and both factors, for product bases.
type Factors = Option<(u32, SimplicialComplex, SimplicialComplex)>;

fn random_base(rng: &mut ChaCha8Rng, profile: &RandomProfile) -> Result<(SimplicialComplex, Factors)> {
    match profile.dim {
        2 => {
            let mut pool: Vec<fn() -> SimplicialComplex> = vec![
                octahedron,
                torus7,
                genus2_connected_sum,
                || octahedron().barycentric_subdivision(),
                || torus7().barycentric_subdivision(),
            ];
            pool.retain(|make| make().vertex_count() <= profile.max_vertices);
            let make = pool
                .choose(rng)
                .ok_or_else(|| Error::Profile(format!("no surface fits in {} vertices", profile.max_vertices)))?;
            Ok((make(), None))
        }
        4 => {
            let factors: [fn() -> SimplicialComplex; 2] = [octahedron, torus7];
            let mut pairs = Vec::new();
            for f in factors {
                for g in factors {
                    if f().vertex_count() * g().vertex_count() <= profile.max_vertices {
                        pairs.push((f, g));
                    }
                }
            }
            let &(f, g) = pairs
                .choose(rng)
                .ok_or_else(|| Error::Profile(format!("no product fits in {} vertices", profile.max_vertices)))?;
            let (k, l) = (f(), g());
            let product = product_with_manifold(&OrbifoldComplex::trivial(k.clone()), &l)?;
            Ok((product.complex().clone(), Some((l.vertex_count(), k, l))))
        }
        d => Err(Error::Profile(format!("dimension {d} is not 2 or 4"))),
    }
}

/// Picks up to `count` pairwise non-adjacent vertices.
fn independent_vertices(rng: &mut ChaCha8Rng, c: &SimplicialComplex, count: usize) -> Vec<u32> {
    let mut verts: Vec<u32> = c.ids_of_dim(0).map(|s| c.vertices(s)[0]).collect();
    verts.shuffle(rng);
    let mut chosen: Vec<u32> = Vec::new();
    for v in verts {
        if chosen.len() == count {
            break;
        }
        if chosen.iter().all(|&w| c.find(&[v.min(w), v.max(w)]).is_none()) {
            chosen.push(v);
        }
    }
    chosen
}

fn inverse_mod(x: u32, m: u32) -> u32 {
    if m <= 1 {
        return 0;
    }
    let e = (x as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u32
}

fn random_unit(rng: &mut ChaCha8Rng, m: u32) -> u32 {
    if m <= 1 {
        return 1;
    }
    loop {
        let u = rng.gen_range(1..m);
        if u.gcd(&m) == 1 {
            return u;
        }
    }
}

/// A random valid cyclic orbifold complex, deterministic per seed.
///
/// The base is a closed surface (dimension 2) or a product of two surfaces
/// (dimension 4). Vertex weights are drawn from one of several schemes and
/// every simplex receives the gcd of its vertex weights, which makes orders
/// divide along faces. Units are a random gauge `c_τ / c_σ` times a twist on
/// edge-to-vertex incidences that is trivial modulo every triangle order
/// above the edge, so all diamonds commute.
pub fn random_orbifold(seed: u64, profile: &RandomProfile) -> Result<OrbifoldComplex> {
    if profile.max_order == 0 {
        return Err(Error::Profile("max_order must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (complex, factors) = random_base(&mut rng, profile)?;
    let max_order = profile.max_order;
    let nv = complex.vertex_count() as usize;
    let mut weight = vec![1u32; nv];
    let scheme = rng.gen_range(0..4);
    match (scheme, &factors) {
        // product strata: cone points on each factor with coprime orders
        (0 | 1, Some((nl, k, l))) => {
            let powers_of_two: Vec<u32> = [2, 4].into_iter().filter(|&x| x <= max_order).collect();
            let threes: Vec<u32> = [3].into_iter().filter(|&x| x <= max_order).collect();
            let mut wk = vec![1u32; k.vertex_count() as usize];
            let mut wl = vec![1u32; l.vertex_count() as usize];
            let nk_cones = rng.gen_range(0..=2);
            let nl_cones = rng.gen_range(0..=2);
            for v in independent_vertices(&mut rng, k, nk_cones) {
                if let Some(&a) = powers_of_two.choose(&mut rng) {
                    wk[v as usize] = a;
                }
            }
            for v in independent_vertices(&mut rng, l, nl_cones) {
                if let Some(&b) = threes.choose(&mut rng) {
                    wl[v as usize] = b;
                }
            }
            for (v, w) in weight.iter_mut().enumerate() {
                let (a, b) = (v as u32 / nl, v as u32 % nl);
                let prod = wk[a as usize] * wl[b as usize];
                *w = if prod <= max_order { prod } else { wk[a as usize] };
            }
        }
        // isolated cone points
        (0 | 1, None) | (2, _) => {
            let count = rng.gen_range(0..=3);
            for v in independent_vertices(&mut rng, &complex, count) {
                if max_order >= 2 {
                    weight[v as usize] = rng.gen_range(2..=max_order);
                }
            }
        }
        // arbitrary weights, mostly trivial
        _ => {
            for w in weight.iter_mut() {
                if max_order >= 2 && rng.gen_bool(0.3) {
                    *w = rng.gen_range(2..=max_order);
                }
            }
        }
    }
    // occasionally a kernel acting trivially everywhere
    if rng.gen_bool(0.15) {
        let top = *weight.iter().max().unwrap_or(&1);
        let k = rng.gen_range(2..=3);
        if top * k <= max_order {
            weight.iter_mut().for_each(|w| *w *= k);
        }
    }

    let mut oc = OrbifoldComplex::trivial(complex);
    let c = oc.complex().clone();
    for s in c.ids() {
        let m = c.vertices(s).iter().fold(0u32, |g, &v| g.gcd(&weight[v as usize]));
        oc.set_order(s, m)?;
    }
    let gauge: Vec<u32> = c.ids().map(|s| random_unit(&mut rng, oc.order(s))).collect();
    let cofacet_lcm = {
        let mut l = vec![1u32; c.len()];
        for s in c.ids() {
            for &f in c.facets(s) {
                l[f.index()] = l[f.index()].lcm(&oc.order(s));
            }
        }
        l
    };
    let twist_edges = rng.gen_bool(0.5);
    for s in c.ids() {
        let m = oc.order(s);
        let inv = inverse_mod(gauge[s.index()], m);
        for (j, &f) in c.facets(s).iter().enumerate() {
            let mut u = (gauge[f.index()] % m.max(1)) as u64 * inv as u64;
            if twist_edges && c.dim(s) == 1 && m > 1 {
                let step = cofacet_lcm[s.index()];
                let candidates: Vec<u32> =
                    (0..m / step).map(|t| (1 + t * step) % m).filter(|&w| w.gcd(&m) == 1).collect();
                if let Some(&w) = candidates.choose(&mut rng) {
                    u *= w as u64;
                }
            }
            let u = if m <= 1 { 1 } else { (u % m as u64) as u32 };
            oc.set_unit(s, j, u);
        }
    }
    Ok(oc)
}

pub const FIXTURE_NAMES: [&str; 6] =
    ["teardrop3", "torus_cone2", "sphere236", "football33xT2", "pentacircle", "headline4d"];

/// The named fixture corpus.
pub fn fixture(name: &str) -> Result<OrbifoldComplex> {
    match name {
        "teardrop3" => surface_orbifold(0, &[3]),
        "torus_cone2" => surface_orbifold(1, &[2]),
        "sphere236" => surface_orbifold(0, &[2, 3, 6]),
        "football33xT2" => product_with_manifold(&surface_orbifold(0, &[3, 3])?, &torus7()),
        "pentacircle" => circle_with_monodromy(5, 2),
        "headline4d" => headline4d(),
        other => Err(Error::Format(format!("unknown fixture {other:?}"))),
    }
}

/// Torus × sphere and torus × genus-two surface, each with a `Z_3` cone point
/// on the torus factor, so the singular set is `S² ⊔ Σ₂` with isotropy `Z_3`.
pub fn headline4d() -> Result<OrbifoldComplex> {
    let cone_torus = surface_orbifold(1, &[3])?;
    let a = product_with_manifold(&cone_torus, &octahedron())?;
    let b = product_with_manifold(&cone_torus, &genus2_connected_sum())?;
    Ok(disjoint_union(&a, &b))
}

/// Unlabeled manifold factors available to [`BuilderSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlainComplex {
    Point,
    Sphere,
    Torus,
    /// The 11-vertex connected sum of two tori.
    Genus2,
    Surface { genus: u32 },
}

impl PlainComplex {
    pub fn build(&self) -> Result<SimplicialComplex> {
        match self {
            PlainComplex::Point => SimplicialComplex::build(&[[0]]),
            PlainComplex::Sphere => Ok(octahedron()),
            PlainComplex::Torus => Ok(torus7()),
            PlainComplex::Genus2 => Ok(genus2_connected_sum()),
            PlainComplex::Surface { genus } => surface_complex(*genus),
        }
    }
}

/// A serializable recipe for any builder output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuilderSpec {
    Fixture { name: String },
    SurfaceOrbifold { genus: u32, cone_orders: Vec<u32> },
    ProductWithManifold { base: Box<BuilderSpec>, manifold: PlainComplex },
    DisjointUnion { a: Box<BuilderSpec>, b: Box<BuilderSpec> },
    CircleWithMonodromy { order: u32, unit: u32 },
    Random { seed: u64, profile: RandomProfile },
}

impl BuilderSpec {
    pub fn build(&self) -> Result<OrbifoldComplex> {
        match self {
            BuilderSpec::Fixture { name } => fixture(name),
            BuilderSpec::SurfaceOrbifold { genus, cone_orders } => surface_orbifold(*genus, cone_orders),
            BuilderSpec::ProductWithManifold { base, manifold } => {
                product_with_manifold(&base.build()?, &manifold.build()?)
            }
            BuilderSpec::DisjointUnion { a, b } => Ok(disjoint_union(&a.build()?, &b.build()?)),
            BuilderSpec::CircleWithMonodromy { order, unit } => circle_with_monodromy(*order, *unit),
            BuilderSpec::Random { seed, profile } => random_orbifold(*seed, profile),
        }
    }
}

/// Ids of the simplices whose vertices are all in `vertices`.
pub fn induced_simplices(c: &SimplicialComplex, vertices: &[u32]) -> Vec<SimplexId> {
    c.ids().filter(|&s| c.vertices(s).iter().all(|v| vertices.contains(v))).collect()
}
