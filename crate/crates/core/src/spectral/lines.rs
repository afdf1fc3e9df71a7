use num_complex::Complex64 as C64;

/// Applies `f` to every line of a row-major tensor along `axis`, producing a
/// tensor whose extent along `axis` is `new_len`.
pub(crate) fn map_lines<F>(
    data: &[C64],
    shape: &[usize],
    axis: usize,
    new_len: usize,
    mut f: F,
) -> Vec<C64>
where
    F: FnMut(&[C64]) -> Vec<C64>,
{
    let outer: usize = shape[..axis].iter().product();
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); outer * new_len * inner];
    let mut line = vec![C64::new(0.0, 0.0); len];
    for o in 0..outer {
        for i in 0..inner {
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[(o * len + k) * inner + i];
            }
            let res = f(&line);
            assert_eq!(res.len(), new_len, "line map returned the wrong length");
            for (k, v) in res.into_iter().enumerate() {
                out[(o * new_len + k) * inner + i] = v;
            }
        }
    }
    out
}
