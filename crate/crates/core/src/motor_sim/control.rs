use super::params::ControllerGains;

/// Integrator memory of the d- and q-axis current PI controllers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CurrentControlState {
    pub integral_d: f64,
    pub integral_q: f64,
}

/// One update of the dq current loop. The d axis regulates `i_d` to zero and
/// the q axis tracks `i_q_star`. The integrator uses backward Euler, so the
/// current error already contributes to the integral at this sample.
pub fn current_control_step(
    i_d: f64,
    i_q: f64,
    i_q_star: f64,
    state: CurrentControlState,
    gains: &ControllerGains,
) -> (f64, f64, CurrentControlState) {
    let e_d = -i_d;
    let e_q = i_q_star - i_q;
    let mut next = state;
    if gains.current_ki != 0.0 {
        let k = gains.current_ki * gains.sample_time;
        next.integral_d += k * e_d;
        next.integral_q += k * e_q;
    }
    let v_d = gains.current_kp * e_d + next.integral_d;
    let v_q = gains.current_kp * e_q + next.integral_q;
    (v_d, v_q, next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_only(kp: f64) -> ControllerGains {
        ControllerGains {
            current_kp: kp,
            current_ki: 0.0,
            ..ControllerGains::default()
        }
    }

    #[test]
    fn zero_error_gives_zero_voltage() {
        let (vd, vq, _) =
            current_control_step(0.0, 0.7, 0.7, CurrentControlState::default(), &ControllerGains::default());
        assert_eq!((vd, vq), (0.0, 0.0));
    }

    #[test]
    fn proportional_only() {
        let (vd, vq, st) = current_control_step(0.0, 0.0, 1.0, CurrentControlState::default(), &p_only(6.6));
        assert_eq!(vq, 6.6);
        assert_eq!(vd, 0.0);
        assert_eq!(st, CurrentControlState::default());
    }

    #[test]
    fn d_axis_opposes_current() {
        let (vd, _, _) = current_control_step(0.5, 0.0, 0.0, CurrentControlState::default(), &p_only(2.0));
        assert_eq!(vd, -1.0);
    }

    #[test]
    fn integral_accumulates_per_backward_euler() {
        let gains = ControllerGains {
            current_kp: 2.0,
            current_ki: 300.0,
            sample_time: 1e-3,
            ..ControllerGains::default()
        };
        let e = 0.25;
        let mut st = CurrentControlState::default();
        let mut vq = 0.0;
        for n in 1..=20 {
            let out = current_control_step(0.0, 1.0 - e, 1.0, st, &gains);
            vq = out.1;
            st = out.2;
            let expected = gains.current_kp * e + gains.current_ki * gains.sample_time * n as f64 * e;
            assert!((vq - expected).abs() < 1e-12, "n={n}");
        }
        assert!(vq > 0.0);
    }
}
