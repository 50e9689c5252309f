pub mod probe_link {
    use ndarray::array;
    use ndarray_linalg::Eig;
    pub fn eig_works() -> bool {
        let a: ndarray::Array2<f64> = array![[0.0, -1.0], [1.0, 0.0]];
        match a.eig() {
            Ok((vals, _)) => vals.iter().any(|v| (v.im - 1.0).abs() < 1e-12),
            Err(_) => false,
        }
    }
}
#[cfg(test)]
mod tests {
    #[test]
    fn lapack_links() {
        assert!(crate::probe_link::eig_works());
    }
}
