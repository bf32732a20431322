//! Set partitions of `{0, …, n-1}` as restricted growth strings.
//!
//! A string `a` is restricted growth when `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`. Strings come out in lexicographic order.

pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions { current: Some(vec![0; n]), first: true }
}

pub struct SetPartitions {
    current: Option<Vec<usize>>,
    first: bool,
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.first {
            self.first = false;
            return self.current.clone();
        }
        let a = self.current.as_mut()?;
        // find the rightmost position that can still grow
        let mut i = a.len();
        while i > 1 {
            i -= 1;
            let max_before = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= max_before {
                a[i] += 1;
                for x in &mut a[i + 1..] {
                    *x = 0;
                }
                return Some(a.clone());
            }
        }
        self.current = None;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).count(), b, "n = {n}");
        }
    }

    #[test]
    fn lexicographic_and_restricted() {
        let all: Vec<_> = set_partitions(4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for a in &all {
            for i in 1..a.len() {
                assert!(a[i] <= 1 + a[..i].iter().max().unwrap());
            }
        }
    }
}
