use num_bigint::BigInt;

use crate::error::AlgebraError;
use crate::group::{cokernel_group, FgAbelianGroup, PresentedGroup};
use crate::matrix::IntegerMatrix;
use crate::scalar::IntegerRing;
use crate::snf::smith_normal_form;

/// Homomorphism between presented groups. Row `i` of `images` is the image
/// of source generator `i` in target generator coordinates.
#[derive(Clone, Debug)]
pub struct AbelianGroupMap<T = BigInt> {
    source: PresentedGroup<T>,
    target: PresentedGroup<T>,
    images: IntegerMatrix<T>,
}

impl<T: IntegerRing> AbelianGroupMap<T> {
    /// Checks that every source relation lands in the target relation lattice.
    pub fn new(source: PresentedGroup<T>, target: PresentedGroup<T>, images: IntegerMatrix<T>) -> Result<Self, AlgebraError> {
        if images.shape() != (source.generators(), target.generators()) {
            return Err(AlgebraError::Shape(format!(
                "images are {}x{}, expected {}x{}",
                images.rows(),
                images.cols(),
                source.generators(),
                target.generators()
            )));
        }
        let lattice = RowLattice::new(target.relations());
        for (i, rel) in source.relations().iter_rows().enumerate() {
            let image = images.left_apply(rel);
            if !lattice.contains(&image) {
                return Err(AlgebraError::IllDefinedMap(format!("source relation {i} maps outside the target relations")));
            }
        }
        Ok(AbelianGroupMap { source, target, images })
    }

    pub fn source(&self) -> &PresentedGroup<T> {
        &self.source
    }

    pub fn target(&self) -> &PresentedGroup<T> {
        &self.target
    }

    pub fn images(&self) -> &IntegerMatrix<T> {
        &self.images
    }

    /// Generators of the kernel lattice `{x : x·F ∈ rows(R_target)}` in
    /// source coordinates (not necessarily independent).
    pub fn kernel_lattice(&self) -> IntegerMatrix<T> {
        let m = self.source.generators();
        let stacked = self.images.vstack(self.target.relations()).expect("same target width");
        let kernel = left_kernel(&stacked);
        kernel.select_cols(&(0..m).collect::<Vec<_>>())
    }

    /// `ker f` as a presented group on the kernel lattice generators.
    pub fn kernel_presentation(&self) -> PresentedGroup<T> {
        let gens = self.kernel_lattice();
        let k = gens.rows();
        // c relates the generators iff c·G lies in the source relation lattice
        let stacked = gens.vstack(self.source.relations()).expect("same source width");
        let rels = left_kernel(&stacked).select_cols(&(0..k).collect::<Vec<_>>());
        PresentedGroup::new(k, rels).expect("width is k")
    }

    pub fn is_zero_on(&self, element: &[T]) -> bool {
        RowLattice::new(self.target.relations()).contains(&self.images.left_apply(element))
    }
}

/// Kernel of a well-formed map, in canonical form.
pub fn kernel_of_map<T: IntegerRing>(f: &AbelianGroupMap<T>) -> FgAbelianGroup {
    let p = f.kernel_presentation();
    cokernel_group(p.generators(), p.relations()).expect("kernel presentation is well-shaped")
}

/// Basis of `{y : y·M = 0}` as the rows of the result.
pub fn left_kernel<T: IntegerRing>(m: &IntegerMatrix<T>) -> IntegerMatrix<T> {
    let s = smith_normal_form(m);
    let rows: Vec<usize> = (s.rank..m.rows()).collect();
    s.left.select_rows(&rows)
}

/// Membership oracle for the row lattice of a matrix.
pub struct RowLattice<T> {
    smith: crate::snf::SmithForm<T>,
}

impl<T: IntegerRing> RowLattice<T> {
    pub fn new(generators: &IntegerMatrix<T>) -> Self {
        RowLattice { smith: smith_normal_form(generators) }
    }

    /// `w = y·M` solvable over Z iff `(w·V)_k` is divisible by `d_k` below the
    /// rank and vanishes above it.
    pub fn contains(&self, w: &[T]) -> bool {
        let z = self.smith.right.left_apply(w);
        z.iter().enumerate().all(|(k, zk)| if k < self.smith.rank { zk.is_multiple_of(&self.smith.diagonal[(k, k)]) } else { zk.is_zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(cols: usize, rows: &[&[i32]]) -> IntegerMatrix<BigInt> {
        IntegerMatrix::from_i32_rows(cols, rows).unwrap()
    }

    #[test]
    fn times_two_on_z8() {
        let z8 = PresentedGroup::from_orders(&[b(8)]);
        let f = AbelianGroupMap::new(z8.clone(), z8, mat(1, &[&[2]])).unwrap();
        assert_eq!(kernel_of_map(&f), FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn injection_z2_into_z4() {
        let f = AbelianGroupMap::new(PresentedGroup::from_orders(&[b(2)]), PresentedGroup::from_orders(&[b(4)]), mat(1, &[&[2]])).unwrap();
        assert!(kernel_of_map(&f).is_trivial());
    }

    #[test]
    fn ill_defined_maps_are_rejected() {
        // Z/2 -> Z/4 sending the generator to a generator does not respect 2g = 0
        let r = AbelianGroupMap::new(PresentedGroup::from_orders(&[b(2)]), PresentedGroup::from_orders(&[b(4)]), mat(1, &[&[1]]));
        assert!(matches!(r, Err(AlgebraError::IllDefinedMap(_))));
        let r = AbelianGroupMap::new(PresentedGroup::<BigInt>::free(2), PresentedGroup::free(1), mat(1, &[&[1]]));
        assert!(matches!(r, Err(AlgebraError::Shape(_))));
    }

    #[test]
    fn degree_four_tor_slice_at_two() {
        // (x, y) in Z/4 ⊕ Z/2 -> (2x - 2y, 2y) in Z/4 ⊕ Z/2; kernel {x ≡ y mod 2} ≅ Z/4
        let g = PresentedGroup::from_orders(&[b(4), b(2)]);
        let f = AbelianGroupMap::new(g.clone(), g, mat(2, &[&[2, 0], &[-2, 2]])).unwrap();
        assert_eq!(kernel_of_map(&f), FgAbelianGroup::cyclic(4));
    }

    #[test]
    fn free_kernels() {
        // Z^2 -> Z, (a, b) -> a + b has kernel Z
        let f = AbelianGroupMap::new(PresentedGroup::<BigInt>::free(2), PresentedGroup::free(1), mat(1, &[&[1], &[1]])).unwrap();
        assert_eq!(kernel_of_map(&f), FgAbelianGroup::free(1));
        // Z -> Z/6 by 1 has kernel 6Z ≅ Z
        let f = AbelianGroupMap::new(PresentedGroup::<BigInt>::free(1), PresentedGroup::from_orders(&[b(6)]), mat(1, &[&[1]])).unwrap();
        assert_eq!(kernel_of_map(&f), FgAbelianGroup::free(1));
    }

    fn cyclic_orders() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(prop_oneof![Just(0i64), 2i64..9], 1..=3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Kernel generators map to zero, and |ker| · |im| = |source| for finite groups.
        #[test]
        fn kernel_properties(src in cyclic_orders(), tgt in cyclic_orders(), seed in prop::collection::vec(-5i64..=5, 9)) {
            let source = PresentedGroup::from_orders(&src.iter().map(|&x| b(x)).collect::<Vec<_>>());
            let target = PresentedGroup::from_orders(&tgt.iter().map(|&x| b(x)).collect::<Vec<_>>());
            // Make the images well defined: generator i of order o_i must map to an
            // element killed by o_i; multiplying a random image by lcm(target)/gcd works.
            let mut images = IntegerMatrix::<BigInt>::zeros(src.len(), tgt.len());
            for i in 0..src.len() {
                for j in 0..tgt.len() {
                    let raw = b(seed[(i * 3 + j) % seed.len()]);
                    let scale = match (src[i], tgt[j]) {
                        (_, 0) if src[i] != 0 => b(0),
                        (0, _) | (_, 0) => b(1),
                        (s, t) => b(t / num_integer::gcd(s, t)),
                    };
                    images[(i, j)] = raw * scale;
                }
            }
            let f = AbelianGroupMap::new(source.clone(), target.clone(), images.clone()).unwrap();
            let presentation = f.kernel_presentation();
            let lattice = f.kernel_lattice();
            for row in lattice.iter_rows() {
                prop_assert!(f.is_zero_on(row));
            }
            let ker = kernel_of_map(&f);
            prop_assert_eq!(&ker, &presentation.canonical());
            if let (Some(ks), Some(ss)) = (ker.order(), source.canonical().order()) {
                // image order = |source| / |ker| must divide |target| when finite
                let im = &ss / &ks;
                prop_assert_eq!(&im * &ks, ss);
                if let Some(ts) = target.canonical().order() {
                    prop_assert!((ts % im).is_zero());
                }
            }
        }
    }
}
