use std::fmt;

/// A permutation of the four vertex labels `{0,1,2,3}` of a tetrahedron.
///
/// Stored as an index into the table of all 24 permutations sorted in
/// lexicographic order of their image tuples, so `Perm4` is a single byte
/// and composition/inversion are table lookups. Code 0 is the identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4(u8);

/// All 24 image tuples in lexicographic order; index = permutation code.
const IMAGES: [[u8; 4]; 24] = build_images();

const fn build_images() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut idx = 0;
    let mut a = 0u8;
    while a < 4 {
        let mut b = 0u8;
        while b < 4 {
            let mut c = 0u8;
            while c < 4 {
                let mut d = 0u8;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[idx] = [a, b, c, d];
                        idx += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const fn code_of(images: [u8; 4]) -> u8 {
    let mut i = 0;
    while i < 24 {
        if IMAGES[i][0] == images[0]
            && IMAGES[i][1] == images[1]
            && IMAGES[i][2] == images[2]
            && IMAGES[i][3] == images[3]
        {
            return i as u8;
        }
        i += 1;
    }
    unreachable!()
}

/// COMPOSE[a][b] = code of the permutation x -> a(b(x)).
const COMPOSE: [[u8; 24]; 24] = build_compose();

const fn build_compose() -> [[u8; 24]; 24] {
    let mut out = [[0u8; 24]; 24];
    let mut a = 0;
    while a < 24 {
        let mut b = 0;
        while b < 24 {
            let mut img = [0u8; 4];
            let mut x = 0;
            while x < 4 {
                img[x] = IMAGES[a][IMAGES[b][x] as usize];
                x += 1;
            }
            out[a][b] = code_of(img);
            b += 1;
        }
        a += 1;
    }
    out
}

const INVERSE: [u8; 24] = build_inverse();

const fn build_inverse() -> [u8; 24] {
    let mut out = [0u8; 24];
    let mut a = 0;
    while a < 24 {
        let mut img = [0u8; 4];
        let mut x = 0;
        while x < 4 {
            img[IMAGES[a][x] as usize] = x as u8;
            x += 1;
        }
        out[a] = code_of(img);
        a += 1;
    }
    out
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4(0);

    /// The permutation sending `i` to `images[i]`. Panics if `images` is not
    /// a bijection on `{0,1,2,3}`.
    pub fn from_images(images: [u8; 4]) -> Perm4 {
        let mut seen = [false; 4];
        for &v in &images {
            assert!(v < 4 && !seen[v as usize], "not a permutation: {images:?}");
            seen[v as usize] = true;
        }
        Perm4(code_of(images))
    }

    /// Reconstructs a permutation from its lexicographic code `0..24`.
    pub fn from_code(code: u8) -> Option<Perm4> {
        (code < 24).then_some(Perm4(code))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn images(self) -> [u8; 4] {
        IMAGES[self.0 as usize]
    }

    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        IMAGES[self.0 as usize][x as usize]
    }

    /// Composition acting right-to-left: `(f.compose(g)).apply(x) == f.apply(g.apply(x))`.
    #[inline]
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(COMPOSE[self.0 as usize][other.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm4 {
        Perm4(INVERSE[self.0 as usize])
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// Iterator over all 24 permutations in code order.
    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24).map(Perm4)
    }

    /// The transposition swapping `a` and `b` (identity if `a == b`).
    pub fn swap(a: u8, b: u8) -> Perm4 {
        let mut img = [0u8, 1, 2, 3];
        img.swap(a as usize, b as usize);
        Perm4::from_images(img)
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.images();
        write!(f, "Perm4({}{}{}{})", im[0], im[1], im[2], im[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.images();
        write!(f, "{}{}{}{}", im[0], im[1], im[2], im[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_code_zero() {
        assert_eq!(Perm4::IDENTITY.images(), [0, 1, 2, 3]);
        assert!(Perm4::IDENTITY.is_identity());
    }

    #[test]
    fn codes_are_lexicographic() {
        let mut imgs: Vec<[u8; 4]> = Perm4::all().map(|p| p.images()).collect();
        let sorted = imgs.clone();
        imgs.sort();
        assert_eq!(imgs, sorted);
        assert_eq!(imgs.len(), 24);
    }

    #[test]
    fn swap_is_involution() {
        for a in 0..4 {
            for b in 0..4 {
                let s = Perm4::swap(a, b);
                assert_eq!(s.compose(s), Perm4::IDENTITY);
            }
        }
    }

    proptest! {
        #[test]
        fn group_laws(a in 0u8..24, b in 0u8..24, c in 0u8..24, x in 0u8..4) {
            let (pa, pb, pc) = (
                Perm4::from_code(a).unwrap(),
                Perm4::from_code(b).unwrap(),
                Perm4::from_code(c).unwrap(),
            );
            // composition definition
            prop_assert_eq!(pa.compose(pb).apply(x), pa.apply(pb.apply(x)));
            // associativity
            prop_assert_eq!(pa.compose(pb).compose(pc), pa.compose(pb.compose(pc)));
            // inverses
            prop_assert_eq!(pa.compose(pa.inverse()), Perm4::IDENTITY);
            prop_assert_eq!(pa.inverse().compose(pa), Perm4::IDENTITY);
            // identity
            prop_assert_eq!(pa.compose(Perm4::IDENTITY), pa);
            prop_assert_eq!(Perm4::IDENTITY.compose(pa), pa);
        }

        #[test]
        fn round_trip_images(code in 0u8..24) {
            let p = Perm4::from_code(code).unwrap();
            prop_assert_eq!(Perm4::from_images(p.images()), p);
        }
    }
}
