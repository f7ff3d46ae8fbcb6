"""Açık XXX Zinciri Laboratuvarı (Streamlit)

Principles:
- UI only renders + triggers.
- Numeric domain (core/) and orchestration (engine/) are pure Python modules.
- Every run goes through engine.pipeline.run, so UI reports equal CLI reports.

Run locally: streamlit run app.py
"""

from __future__ import annotations

import json
from datetime import datetime
from typing import Any, Dict, List, Optional

import numpy as np
import streamlit as st

from engine.config import BRANCHES, COMMANDS, STRATEGIES, RunConfig
from engine.pipeline import energies_of, run, summary_line
from engine.report import dumps_report, report_to_csv
from engine.schemas import ConfigError, parse_config

APP_TITLE = "Açık XXX Zinciri Laboratuvarı"
APP_SUBTITLE = "Paralel olmayan sınır alanları: özdeşlik kontrolü → spektrum → Bethe kökleri."
APP_VERSION = "1.0.0"
EXPECTED_CORE = "core-v1-20261017"

COMMAND_LABELS = {
    "verify": "Özdeşlik kataloğu",
    "spectrum": "Transfer matrisi spektrumu",
    "solve-bae": "Bethe denklemleri",
    "solve-functional": "Fonksiyonel denklem çözümü",
}
BRANCH_LABELS = {"+": "(+) dalı", "-": "(−) dalı", "both": "İki dal"}

st.set_page_config(page_title=APP_TITLE, page_icon="🧲", layout="wide", initial_sidebar_state="expanded")

CSS = """
<style>
.block-container {padding-top: 3.2rem; padding-bottom: 2rem;}
.card {
  border: 1px solid rgba(255,255,255,0.08);
  border-radius: 16px;
  padding: 14px 16px;
  background: rgba(255,255,255,0.03);
}
.pill {
  display: inline-block;
  padding: 2px 10px;
  border-radius: 999px;
  border: 1px solid rgba(255,255,255,0.12);
  font-size: 12px;
  opacity: .85;
}
.pill.ok {border-color: rgba(120,255,160,0.25);}
.pill.bad {border-color: rgba(255,120,120,0.25);}
.small {font-size: 13px; opacity:.75;}
</style>
"""

st.markdown(CSS, unsafe_allow_html=True)


def bootstrap_core_or_stop() -> None:
    """Stop with a helpful message if core/ and app.py come from different versions."""
    try:
        import core
    except Exception as e:
        st.error(f"Core modülleri yüklenemedi.\n\nHata: {type(e).__name__}: {e}")
        st.stop()
    api_ver = getattr(core, "API_VERSION", None)
    if api_ver != EXPECTED_CORE:
        st.error(
            "Core sürümü ile app sürümü uyuşmuyor (repo karışmış olabilir).\n\n"
            f"Beklenen core: {EXPECTED_CORE}, bulunan: {api_ver!r}"
        )
        st.stop()


bootstrap_core_or_stop()


def _ensure_state() -> None:
    ss = st.session_state
    ss.setdefault("report", None)
    ss.setdefault("history", [])
    ss.setdefault("last_error", "")


def _pill(ok: bool, yes: str = "geçti", no: str = "kaldı") -> str:
    return f"<span class='pill {'ok' if ok else 'bad'}'>{yes if ok else no}</span>"


def _fmt_c(pair: Any) -> str:
    if isinstance(pair, list) and len(pair) == 2:
        re_, im_ = pair
        return f"{re_:.10g}" if abs(im_) < 1e-12 else f"{re_:.10g}{im_:+.3g}i"
    return str(pair)


def _sidebar_config() -> Optional[Dict[str, Any]]:
    sb = st.sidebar
    sb.markdown(f"**{APP_TITLE}**  ")
    sb.markdown(f"v{APP_VERSION}")
    sb.markdown("---")

    command = sb.selectbox("Komut", list(COMMANDS), format_func=lambda k: COMMAND_LABELS[k])
    N = sb.slider("Site sayısı N", min_value=1, max_value=5, value=2)
    p = sb.number_input("p (K⁻)", value=2.0, step=0.1, format="%.4f")
    q = sb.number_input("q (K⁺)", value=3.0, step=0.1, format="%.4f")
    xi = sb.number_input("ξ (köşegen dışı)", value=0.5, step=0.1, format="%.4f")
    homogeneous = sb.checkbox("Homojen nokta (θ = 0)", value=command == "solve-bae")
    theta_txt = "homogeneous"
    if not homogeneous:
        default = ",".join(f"{0.2 - 0.6 * j / max(N - 1, 1):.2f}" for j in range(N)) if N > 1 else "0.2"
        theta_txt = sb.text_input("θ (virgülle ayrılmış)", value=default)

    sb.markdown("---")
    branch = sb.selectbox("Dal", list(BRANCHES), index=2, format_func=lambda k: BRANCH_LABELS[k])
    M = sb.text_input("M (sayı veya 'default')", value="default")
    strategy = sb.selectbox("Kök çözücü", list(STRATEGIES))
    seeds = sb.number_input("Başlangıç sayısı", min_value=1, value=200 if command == "solve-functional" else 64, step=1)
    rng_seed = sb.number_input("Seed (deterministik)", min_value=0, value=0, step=1)
    use_cache = sb.checkbox("Sonuç önbelleği", value=True)

    return {
        "command": command,
        "N": int(N),
        "p": float(p),
        "q": float(q),
        "xi": float(xi),
        "theta": theta_txt,
        "branch": branch,
        "M": M,
        "strategy": strategy,
        "seed_count": int(seeds),
        "rng_seed": int(rng_seed),
        "use_cache": bool(use_cache),
    }


def _run(raw: Dict[str, Any]) -> None:
    ss = st.session_state
    try:
        config: RunConfig = parse_config(raw)
    except ConfigError as e:
        ss.last_error = f"Geçersiz ayar [{e.field}]: {e}"
        return
    with st.spinner("Hesaplanıyor…"):
        report = run(config)
    ss.report = report
    ss.last_error = ""
    ss.history.append({"at": datetime.now().strftime("%H:%M:%S"), "summary": summary_line(report), "report": report})


def _render_verify(res: Dict[str, Any]) -> None:
    s = res.get("summary") or {}
    st.markdown(f"**{s.get('passed')}/{s.get('total')}** kontrol geçti.")
    rows = [
        {"özdeşlik": r["identity"], "artık": r["residual"], "tolerans": r["tolerance"], "durum": "✓" if r["passed"] else "✗"}
        for r in res.get("table", [])
    ]
    st.dataframe(rows, use_container_width=True)


def _render_spectrum(res: Dict[str, Any]) -> None:
    st.markdown(f"Bulunan özdeğer polinomu: **{res.get('count')}** / {res.get('expected_count')}")
    rows = []
    for c in res.get("candidates", []):
        row = {"#": c["index"], "Λ(u*)": _fmt_c(c["value_at_reference"]), "en büyük artık": max(c["residuals"].values())}
        if "energy" in c:
            row["E"] = _fmt_c(c["energy"])
            forms = c.get("determinant_forms") or {}
            row["Δ̄ (çarpım)"] = forms.get("factor_product")
            row["Δ̄ (basılı)"] = forms.get("printed")
        rows.append(row)
    st.dataframe(rows, use_container_width=True)


def _render_solve_bae(res: Dict[str, Any], report: Dict[str, Any]) -> None:
    match = res.get("spectrum_match")
    if not match:
        st.info("Enerji eşleştirmesi yalnızca homojen noktada yapılır.")
        st.json(res.get("solves"))
        return
    frac = float(match.get("matched_fraction") or 0.0)
    dist = match.get("max_distance")
    c1, c2, c3, c4 = st.columns(4)
    c1.metric("Eşleşen oran", f"{frac:.3f}")
    c2.metric("Seviye sayısı", len(match.get("levels") or []))
    c3.metric("Eşleşmeyen kesin seviye", int(match.get("unmatched_count") or 0))
    c4.metric("En büyük mesafe (eşleşen)", "yok" if dist is None else f"{dist:.2e}")
    if match.get("note"):
        st.warning(match["note"])
    exact = np.array([complex(*e) for e in match.get("exact") or []])
    found = energies_of(report)
    st.markdown("**Enerjiler** (kesin köşegenleştirme ve T–Q)")
    st.dataframe(
        {
            "kesin E": [f"{e.real:.10g}" for e in exact],
            "T–Q E (sıralı)": [f"{e.real:.10g}" for e in np.sort_complex(found)[: len(exact)]]
            + [""] * max(0, len(exact) - len(found)),
        },
        use_container_width=True,
    )
    st.dataframe(res.get("table", []), use_container_width=True)
    drift = res.get("xi_continuation")
    if drift:
        st.caption(f"ξ sürekliliği: {drift['chains']} zincir, en büyük sapma {drift['max_drift']:.2e}")


def _render_functional(res: Dict[str, Any]) -> None:
    st.markdown(f"Denenen: **{res.get('seeds_tried')}**, yakınsayan: **{res.get('converged')}**, aday: **{len(res.get('candidates', []))}**")
    oracle = res.get("oracle")
    if oracle:
        st.markdown(
            f"Kesin spektrumdan geri kazanılan: **{oracle['recovered']}/{oracle['count']}** "
            + _pill(bool(oracle["complete"]), "tam", "eksik"),
            unsafe_allow_html=True,
        )


def page_run() -> None:
    ss = st.session_state
    st.title(APP_TITLE)
    st.caption(APP_SUBTITLE)
    if ss.last_error:
        st.error(ss.last_error)

    report = ss.report
    if report is None:
        st.info("Soldan parametreleri seçip **Çalıştır**'a bas.")
        return

    failures: List[Dict[str, Any]] = report.get("failures") or []
    st.markdown(
        f"<div class='card'>{summary_line(report)} &nbsp; {_pill(not failures)}</div>",
        unsafe_allow_html=True,
    )
    st.write("")
    res = report.get("results") or {}
    command = (report.get("config") or {}).get("command")
    if command == "verify":
        _render_verify(res)
    elif command == "spectrum":
        _render_spectrum(res)
    elif command == "solve-bae":
        _render_solve_bae(res, report)
    elif command == "solve-functional":
        _render_functional(res)
    if failures:
        st.subheader("Hatalar")
        st.json(failures)

    c1, c2 = st.columns(2)
    c1.download_button(
        "Raporu indir (JSON)",
        data=dumps_report(report).encode("utf-8"),
        file_name=f"odba_{command}.json",
        mime="application/json",
    )
    c2.download_button(
        "Tabloyu indir (CSV)",
        data=report_to_csv(report).encode("utf-8"),
        file_name=f"odba_{command}.csv",
        mime="text/csv",
    )


def page_history() -> None:
    ss = st.session_state
    st.title("Geçmiş")
    st.caption("Bu oturumda üretilen raporlar.")
    if not ss.history:
        st.info("Henüz kayıt yok.")
        return
    for item in reversed(ss.history):
        st.markdown(f"#### {item['at']} · {item['summary']}")
        with st.expander("Rapor (JSON)"):
            st.json(item["report"])


def page_debug() -> None:
    ss = st.session_state
    st.title("Debug")
    st.subheader("Son rapor: config")
    st.json((ss.report or {}).get("config") or {})
    st.subheader("Zamanlama")
    st.json((ss.report or {}).get("timing") or {})
    st.subheader("Sürümler")
    st.json((ss.report or {}).get("version") or {})

    up = st.file_uploader("Rapor yükle (içindeki config yeniden çalıştırılır)", type=["json"], accept_multiple_files=False)
    if up is not None:
        try:
            data = json.loads(up.read().decode("utf-8"))
            _run(dict(data.get("config") or {}))
            st.success("Rapor yeniden üretildi.")
        except (ValueError, KeyError) as e:
            st.error(f"Yükleme başarısız: {e}")


def main() -> None:
    _ensure_state()
    raw = _sidebar_config()
    st.sidebar.markdown("---")
    if st.sidebar.button("Çalıştır", type="primary", use_container_width=True):
        _run(raw)
    page = st.sidebar.radio("Sayfa", ["Sonuç", "Geçmiş", "Debug"], index=0)
    if page == "Sonuç":
        page_run()
    elif page == "Geçmiş":
        page_history()
    else:
        page_debug()


if __name__ == "__main__":
    main()
