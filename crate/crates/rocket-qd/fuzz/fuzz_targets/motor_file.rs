//! Motor file parsing must never panic, and any motor it accepts must obey
//! the basic curve invariants the simulator relies on.

#![no_main]

use libfuzzer_sys::fuzz_target;
use rocket_qd::motor::parse_motor;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(motor) = parse_motor(text) {
        assert!(motor.burn_time().is_finite() && motor.burn_time() > 0.0);
        assert!(motor.total_impulse().is_finite() && motor.total_impulse() >= 0.0);
        assert_eq!(motor.thrust(motor.burn_time()), 0.0);
        assert!(motor.mass(0.0) >= motor.mass(motor.burn_time()));
    }
});
