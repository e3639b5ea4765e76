"""Hot loops of the hourly simulation.

``simulate_kernel`` fuses generation and battery dispatch for one design into
a single pass over the year. Scalar parameters travel in a flat float64
vector indexed by the ``P_*`` constants (see :func:`hresopt.dispatch.pack_params`).
"""
import numpy as np

from ._accel import njit

# parameter vector layout
P_N_PV = 0
P_N_WG = 1
P_N_BIO = 2
P_E_MAX_WH = 3
P_V_CI = 4
P_V_R = 5
P_V_CO = 6
P_PR_SPEC = 7
P_WIND_A = 8
P_WIND_B = 9
P_AREA_ETA = 10
P_WIND_FACTOR = 11
P_COS_TILTED = 12
P_SIN_TILTED = 13
P_COS_BETA = 14
P_RHO = 15
P_NOCT = 16
P_VOC_STC = 17
P_KV = 18
P_VOC_TREF = 19
P_ISC_STC = 20
P_KI = 21
P_FF = 22
P_ETA_PV = 23
P_BIO_W_PER_M3 = 24
P_BIO_CAP_W = 25
P_SIGMA = 26
P_ETA_C = 27
P_ETA_D = 28
P_SOC_MIN = 29
P_SOC_MAX = 30
P_SOC0 = 31
N_PARAMS = 32

# totals layout
T_DEMAND = 0
T_UNMET = 1
T_SURPLUS = 2
T_WIND = 3
T_PV = 4
T_BIO = 5
T_CHARGE = 6
T_DISCHARGE = 7
T_MAX_RESIDUAL = 8
N_TOTALS = 9

TRACE_COLUMNS = ("wind_w", "pv_w", "bio_w", "load_w", "soc", "charge_wh", "discharge_wh", "unmet_wh", "surplus_wh")

BEAM_RATIO_CAP = 10.0


@njit
def soc_update(soc_prev, net_w, dt, e_max_wh, sigma, eta_c, eta_d, soc_min, soc_max):
    # conversion factors are independent of soc so the divisions stay off the
    # hour-to-hour dependency chain
    soc = soc_prev * (1.0 - sigma * dt / 24.0)
    if soc < soc_min:
        soc = soc_min
    energy = net_w * dt
    charged = 0.0
    discharged = 0.0
    unmet = 0.0
    surplus = 0.0
    if energy > 0.0:
        if e_max_wh > 0.0:
            room = (soc_max - soc) * (e_max_wh / eta_c)
            charged = min(energy, max(room, 0.0))
            soc = soc + charged * (eta_c / e_max_wh)
        surplus = energy - charged
    elif energy < 0.0:
        need = -energy
        if e_max_wh > 0.0:
            avail = (soc - soc_min) * (e_max_wh * eta_d)
            discharged = min(need, max(avail, 0.0))
            soc = soc - discharged * (1.0 / (eta_d * e_max_wh))
        unmet = need - discharged
    soc = min(max(soc, soc_min), soc_max)
    return soc, charged, discharged, unmet, surplus


@njit
def simulate_kernel(load, ghi, diffuse, temp, wind_ref, cdcw, sin_dec, cos_zen, gas, p, trace):
    n_hours = load.shape[0]
    record = trace.shape[0] == n_hours
    # scalars hoisted out of the loop; array reads there defeat LLVM's aliasing analysis
    n_pv, n_wg = p[P_N_PV], p[P_N_WG]
    e_max = p[P_E_MAX_WH]
    v_ci, v_r, v_co = p[P_V_CI], p[P_V_R], p[P_V_CO]
    pr_spec, wind_a, wind_b = p[P_PR_SPEC], p[P_WIND_A], p[P_WIND_B]
    area_eta, wind_factor = p[P_AREA_ETA], p[P_WIND_FACTOR]
    cos_tilted, sin_tilted = p[P_COS_TILTED], p[P_SIN_TILTED]
    sky = (1.0 + p[P_COS_BETA]) / 2.0
    ground = p[P_RHO] * (1.0 - p[P_COS_BETA]) / 2.0
    noct, voc_stc, kv, voc_tref = p[P_NOCT], p[P_VOC_STC], p[P_KV], p[P_VOC_TREF]
    isc_stc, ki, ff, eta_pv = p[P_ISC_STC], p[P_KI], p[P_FF], p[P_ETA_PV]
    bio_w_per_m3, bio_cap = p[P_BIO_W_PER_M3], p[P_BIO_CAP_W]
    sigma, eta_c, eta_d = p[P_SIGMA], p[P_ETA_C], p[P_ETA_D]
    soc_min, soc_max = p[P_SOC_MIN], p[P_SOC_MAX]
    soc = p[P_SOC0]

    demand = 0.0
    unmet = 0.0
    surplus = 0.0
    tot_wind = 0.0
    tot_pv = 0.0
    tot_bio = 0.0
    charge = 0.0
    discharge = 0.0
    max_residual = 0.0
    for t in range(n_hours):
        g = ghi[t]
        d = diffuse[t]
        den = cos_zen[t]
        rb = 0.0
        if den > 0.0:
            rb = (cos_tilted * cdcw[t] + sin_tilted * sin_dec[t]) / den
            rb = min(max(rb, 0.0), BEAM_RATIO_CAP)
        gt = max((g - d) * rb + d * sky + g * ground, 0.0)
        tc = temp[t] + (noct - 20.0) * gt / 1000.0
        voc = voc_stc - kv * (tc - voc_tref)
        isc = (isc_stc + ki * (tc - 25.0)) * gt / 1000.0
        pv = eta_pv * n_pv * max(voc * isc * ff, 0.0)

        v = wind_ref[t] * wind_factor
        if v < v_ci or v >= v_co:
            pw = 0.0
        elif v < v_r:
            pw = wind_a * v * v * v - wind_b * pr_spec
        else:
            pw = pr_spec
        wind = pw * area_eta * n_wg

        bio = min(gas[t] * bio_w_per_m3, bio_cap)

        gen = wind + pv + bio
        lt = load[t]
        soc, ch, dis, un, sur = soc_update(soc, gen - lt, 1.0, e_max, sigma, eta_c, eta_d,
                                           soc_min, soc_max)
        residual = abs(gen + dis + un - lt - ch - sur)
        demand += lt
        unmet += un
        surplus += sur
        tot_wind += wind
        tot_pv += pv
        tot_bio += bio
        charge += ch
        discharge += dis
        if residual > max_residual:
            max_residual = residual
        if record:
            trace[t, 0] = wind
            trace[t, 1] = pv
            trace[t, 2] = bio
            trace[t, 3] = lt
            trace[t, 4] = soc
            trace[t, 5] = ch
            trace[t, 6] = dis
            trace[t, 7] = un
            trace[t, 8] = sur

    totals = np.zeros(N_TOTALS)
    totals[T_DEMAND] = demand
    totals[T_UNMET] = unmet
    totals[T_SURPLUS] = surplus
    totals[T_WIND] = tot_wind
    totals[T_PV] = tot_pv
    totals[T_BIO] = tot_bio
    totals[T_CHARGE] = charge
    totals[T_DISCHARGE] = discharge
    totals[T_MAX_RESIDUAL] = max_residual
    return totals, soc
