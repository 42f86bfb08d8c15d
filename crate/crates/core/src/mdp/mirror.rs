//! Sagittal-plane reflection of observations and actions.
//!
//! Reflecting across the robot's x-z plane swaps the left and right legs and
//! flips every quantity that changes sign under y → -y: roll and yaw rates,
//! the lateral gravity component, lateral and yaw commands, and hip
//! abduction angles. Pitch-related quantities are unchanged. Both maps are
//! involutions.

use super::{joint_index, Action, Observation, ACT_DIM};
use crate::pattern::Leg;

fn mirror_joints(v: &[f64; ACT_DIM]) -> [f64; ACT_DIM] {
    let mut out = [0.0; ACT_DIM];
    for leg in Leg::ALL {
        let src = leg.mirrored().index();
        for j in 0..3 {
            let x = v[joint_index(src, j)];
            out[joint_index(leg.index(), j)] = if j == 0 { -x } else { x };
        }
    }
    out
}

pub fn mirror_obs(s: &Observation) -> Observation {
    let [wx, wy, wz] = s.base_ang_vel;
    let [gx, gy, gz] = s.gravity;
    let [vx, vy, yaw] = s.command;
    let mut window = s.contact_window;
    for leg in Leg::ALL {
        window[leg.index()] = s.contact_window[leg.mirrored().index()];
    }
    Observation {
        base_ang_vel: [-wx, wy, -wz],
        gravity: [gx, -gy, gz],
        command: [vx, -vy, -yaw],
        joint_pos: mirror_joints(&s.joint_pos),
        joint_vel: mirror_joints(&s.joint_vel),
        prev_action: mirror_joints(&s.prev_action),
        contact_window: window,
    }
}

pub fn mirror_act(a: &Action) -> Action {
    Action(mirror_joints(&a.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::strategies::arb_observation;
    use crate::mdp::DefaultPose;
    use proptest::prelude::*;

    #[test]
    fn zero_is_fixed_point() {
        let z = Observation::zeroed();
        assert_eq!(mirror_obs(&z), z);
        assert_eq!(mirror_act(&Action::ZERO), Action::ZERO);
    }

    #[test]
    fn window_rows_swap_pairwise() {
        let mut s = Observation::zeroed();
        s.contact_window = [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
        ];
        let m = mirror_obs(&s);
        assert_eq!(
            m.contact_window,
            [
                [0, 1, 0, 0, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 1, 0, 0]
            ]
        );
    }

    #[test]
    fn explicit_sign_map() {
        let mut s = Observation::zeroed();
        s.base_ang_vel = [1.0, 2.0, 3.0];
        s.gravity = [0.1, 0.2, -0.9];
        s.command = [0.5, 0.0, 0.3];
        s.joint_pos = std::array::from_fn(|i| i as f64 + 1.0);
        let m = mirror_obs(&s);
        assert_eq!(m.base_ang_vel, [-1.0, 2.0, -3.0]);
        assert_eq!(m.gravity, [0.1, -0.2, -0.9]);
        assert_eq!(m.command, [0.5, 0.0, -0.3]);
        // FL <- -FR hip, FR thigh/calf
        assert_eq!(&m.joint_pos[0..3], &[-4.0, 5.0, 6.0]);
        assert_eq!(&m.joint_pos[3..6], &[-1.0, 2.0, 3.0]);
        assert_eq!(&m.joint_pos[6..9], &[-10.0, 11.0, 12.0]);
        assert_eq!(&m.joint_pos[9..12], &[-7.0, 8.0, 9.0]);
    }

    #[test]
    fn default_pose_is_symmetric() {
        let pose = DefaultPose::a1();
        assert_eq!(mirror_act(&Action(pose.0)), Action(pose.0));
    }

    proptest! {
        #[test]
        fn obs_mirror_is_involution(s in arb_observation()) {
            prop_assert_eq!(mirror_obs(&mirror_obs(&s)), s);
        }

        #[test]
        fn act_mirror_is_involution(v in proptest::array::uniform12(-5.0f64..5.0)) {
            let a = Action(v);
            prop_assert_eq!(mirror_act(&mirror_act(&a)), a);
        }
    }
}
