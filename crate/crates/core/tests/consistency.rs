//! Cross-checks between independent computation paths that share no code:
//! the memory-kernel solver, the direct quadrature of mode amplitudes, and
//! the discrete-bath propagation.

use num_complex::Complex64;
use rwa_dynamics::{
    discretize_bath, exponential_kernel, kernel_zero_t, one_photon_amplitude, oracle_amplitude,
    resolved_window, solve_amplitude, solve_driven_amplitude, DriveFunction, QuadratureConfig,
    SolverConfig, SpectralDensity, TimeGrid,
};

/// The amplitude in one reservoir mode obeys a memoryless driven equation,
/// `X' = -iωX - i g* x(t)`, whose solution is the convolution computed by
/// `one_photon_amplitude`; both paths must agree.
#[test]
fn mode_amplitude_quadrature_agrees_with_the_driven_solve() {
    let grid = TimeGrid::from_duration(5.0, 1e-3).unwrap();
    let (omega_sys, omega_mode) = (5.0, 4.0);
    let coupling = Complex64::new(0.3, -0.2);

    let kernel = exponential_kernel(1.0, 1.0, omega_sys, grid);
    let x = solve_amplitude(omega_sys, &kernel, grid.samples(), &SolverConfig::new(grid.dt()))
        .unwrap();

    let direct = one_photon_amplitude(&x, coupling, omega_mode);

    let no_memory = exponential_kernel(0.0, 1.0, omega_sys, grid);
    let dt = grid.dt();
    let x_for_drive = x.clone();
    let drive = DriveFunction::custom(move |t| {
        let n = (t / dt).round() as usize;
        coupling.conj() * x_for_drive.value(n)
    });
    let solved = solve_driven_amplitude(
        omega_mode,
        &no_memory,
        &drive,
        Complex64::new(0.0, 0.0),
        grid.samples(),
        &SolverConfig::new(dt),
    )
    .unwrap();

    let err = direct
        .values()
        .iter()
        .zip(solved.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-5, "max deviation {err:.3e}");
}

/// The system amplitude from the memory-kernel solve agrees with the head
/// amplitude of a 2000-mode propagation over the same window, well below
/// the discrete recurrence time.
#[test]
fn continuum_amplitude_agrees_with_the_discrete_bath_head_amplitude() {
    let grid = TimeGrid::from_duration(10.0, 2e-3).unwrap();
    let density = SpectralDensity::lorentz(0.5, 1.0, 5.0).unwrap();
    let quad = QuadratureConfig::default();

    let kernel = kernel_zero_t(&density, grid, &quad).unwrap();
    let x = solve_amplitude(5.0, &kernel, grid.samples(), &SolverConfig::new(grid.dt())).unwrap();

    let window = resolved_window(&density, &quad).unwrap();
    let bath = discretize_bath(&density, 2000, window).unwrap();
    assert!(bath.recurrence_time() > 2.0 * grid.t_max());
    let head = oracle_amplitude(&bath, 5.0, grid);

    let err = x
        .values()
        .iter()
        .zip(head.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-3, "max deviation {err:.3e}");
}

/// The discrete kernel of the 2000-mode bath reproduces the quadrature
/// kernel itself, tying the two reservoir representations together at the
/// level the solver consumes.
#[test]
fn discrete_and_quadrature_kernels_agree_on_the_shared_window() {
    let grid = TimeGrid::from_duration(10.0, 5e-2).unwrap();
    let density = SpectralDensity::lorentz(1.0, 1.0, 5.0).unwrap();
    let quad = QuadratureConfig::default();

    let kernel = kernel_zero_t(&density, grid, &quad).unwrap();
    let window = resolved_window(&density, &quad).unwrap();
    let bath = discretize_bath(&density, 2000, window).unwrap();
    let discrete = bath.kernel_samples(grid);

    let err = kernel
        .values()
        .iter()
        .zip(discrete.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-4, "max deviation {err:.3e}");
    assert!((bath.coupling_mass() - kernel.value(0).re).abs() < 1e-4);
}
