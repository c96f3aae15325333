//! Vector representations used by the enumeration loops.
//!
//! GF(2) and GF(4) words are bit-sliced: `lo` and `hi` hold the two
//! coordinates of each entry in the basis {1, ω}. Other fields use plain byte
//! vectors with table arithmetic.

use crate::galois::Dense;

pub(crate) trait Space: Sync {
    type V: Clone + Send + Sync;

    fn zero(&self) -> Self::V;
    fn pack(&self, row: &[u8]) -> Self::V;
    fn unpack(&self, v: &Self::V) -> Vec<u8>;
    /// `out = a + b`
    fn add_into(&self, out: &mut Self::V, a: &Self::V, b: &Self::V);
    fn add_assign(&self, acc: &mut Self::V, b: &Self::V);
    fn scale(&self, v: &Self::V, s: u8) -> Self::V;
    fn weight(&self, v: &Self::V) -> u32;
    /// Euclidean inner product is zero.
    fn orthogonal(&self, a: &Self::V, b: &Self::V) -> bool;
}

#[derive(Clone, Copy)]
pub(crate) struct Packed<const W: usize> {
    lo: [u64; W],
    hi: [u64; W],
}

pub(crate) struct Gf4Space<const W: usize> {
    pub n: usize,
}

impl<const W: usize> Space for Gf4Space<W> {
    type V = Packed<W>;

    fn zero(&self) -> Packed<W> {
        Packed {
            lo: [0; W],
            hi: [0; W],
        }
    }

    fn pack(&self, row: &[u8]) -> Packed<W> {
        let mut v = self.zero();
        for (i, &x) in row.iter().enumerate() {
            v.lo[i / 64] |= ((x & 1) as u64) << (i % 64);
            v.hi[i / 64] |= (((x >> 1) & 1) as u64) << (i % 64);
        }
        v
    }

    fn unpack(&self, v: &Packed<W>) -> Vec<u8> {
        (0..self.n)
            .map(|i| {
                let lo = (v.lo[i / 64] >> (i % 64)) & 1;
                let hi = (v.hi[i / 64] >> (i % 64)) & 1;
                (lo | hi << 1) as u8
            })
            .collect()
    }

    #[inline(always)]
    fn add_into(&self, out: &mut Packed<W>, a: &Packed<W>, b: &Packed<W>) {
        for w in 0..W {
            out.lo[w] = a.lo[w] ^ b.lo[w];
            out.hi[w] = a.hi[w] ^ b.hi[w];
        }
    }

    #[inline(always)]
    fn add_assign(&self, acc: &mut Packed<W>, b: &Packed<W>) {
        for w in 0..W {
            acc.lo[w] ^= b.lo[w];
            acc.hi[w] ^= b.hi[w];
        }
    }

    fn scale(&self, v: &Packed<W>, s: u8) -> Packed<W> {
        let mut out = *v;
        // multiplication by ω: (lo, hi) -> (hi, lo ^ hi)
        let times = match s {
            0 => return self.zero(),
            1 => 0,
            2 => 1,
            3 => 2,
            _ => unreachable!("not a GF(4) element"),
        };
        for _ in 0..times {
            for w in 0..W {
                let (lo, hi) = (out.lo[w], out.hi[w]);
                out.lo[w] = hi;
                out.hi[w] = lo ^ hi;
            }
        }
        out
    }

    #[inline(always)]
    fn weight(&self, v: &Packed<W>) -> u32 {
        let mut s = 0;
        for w in 0..W {
            s += (v.lo[w] | v.hi[w]).count_ones();
        }
        s
    }

    fn orthogonal(&self, a: &Packed<W>, b: &Packed<W>) -> bool {
        // (a0 + a1 ω)(b0 + b1 ω) = (a0 b0 + a1 b1) + (a0 b1 + a1 b0 + a1 b1) ω
        let mut lo = 0u32;
        let mut hi = 0u32;
        for w in 0..W {
            lo ^= ((a.lo[w] & b.lo[w]) ^ (a.hi[w] & b.hi[w])).count_ones() & 1;
            hi ^= ((a.lo[w] & b.hi[w]) ^ (a.hi[w] & b.lo[w]) ^ (a.hi[w] & b.hi[w])).count_ones() & 1;
        }
        lo == 0 && hi == 0
    }
}

pub(crate) struct ByteSpace<'a> {
    pub n: usize,
    pub t: &'a Dense,
}

impl Space for ByteSpace<'_> {
    type V = Vec<u8>;

    fn zero(&self) -> Vec<u8> {
        vec![0; self.n]
    }

    fn pack(&self, row: &[u8]) -> Vec<u8> {
        row.to_vec()
    }

    fn unpack(&self, v: &Vec<u8>) -> Vec<u8> {
        v.clone()
    }

    #[inline]
    fn add_into(&self, out: &mut Vec<u8>, a: &Vec<u8>, b: &Vec<u8>) {
        let q = self.t.q;
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = self.t.add[x as usize * q + y as usize];
        }
    }

    #[inline]
    fn add_assign(&self, acc: &mut Vec<u8>, b: &Vec<u8>) {
        let q = self.t.q;
        for (o, &y) in acc.iter_mut().zip(b) {
            *o = self.t.add[*o as usize * q + y as usize];
        }
    }

    fn scale(&self, v: &Vec<u8>, s: u8) -> Vec<u8> {
        let q = self.t.q;
        v.iter().map(|&x| self.t.mul[s as usize * q + x as usize]).collect()
    }

    #[inline]
    fn weight(&self, v: &Vec<u8>) -> u32 {
        v.iter().filter(|&&x| x != 0).count() as u32
    }

    fn orthogonal(&self, a: &Vec<u8>, b: &Vec<u8>) -> bool {
        let q = self.t.q;
        let mut acc = 0u8;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.t.add[acc as usize * q + self.t.mul[x as usize * q + y as usize] as usize];
        }
        acc == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::GaloisField;

    #[test]
    fn packed_matches_tables() {
        let f = GaloisField::new(2, 2).unwrap();
        let t = f.dense().unwrap();
        let bytes = ByteSpace { n: 70, t };
        let packed = Gf4Space::<2> { n: 70 };
        let a: Vec<u8> = (0..70).map(|i| (i * 7 % 4) as u8).collect();
        let b: Vec<u8> = (0..70).map(|i| (i * 5 % 3) as u8).collect();
        let (pa, pb) = (packed.pack(&a), packed.pack(&b));
        assert_eq!(packed.unpack(&pa), a);
        for s in 0..4u8 {
            assert_eq!(packed.unpack(&packed.scale(&pa, s)), bytes.scale(&a, s));
        }
        let mut sum = packed.zero();
        packed.add_into(&mut sum, &pa, &pb);
        let mut bsum = bytes.zero();
        bytes.add_into(&mut bsum, &a, &b);
        assert_eq!(packed.unpack(&sum), bsum);
        assert_eq!(packed.weight(&sum), bytes.weight(&bsum));
        for s in 0..4u8 {
            let c = bytes.scale(&b, s);
            assert_eq!(packed.orthogonal(&pa, &packed.pack(&c)), bytes.orthogonal(&a, &c));
        }
    }
}
