/**
 * DOM wiring for the premium calculator.
 *
 * The form mirrors the classic layout: free-text numeric fields, three
 * dropdowns per date, a Display radio choosing which price to show, and
 * an explicit Results button.  Editing any field after a successful
 * quote re-submits automatically behind a 300 ms debounce; the stale
 * result stays visible, dimmed, until the fresh one lands.  Every number
 * shown comes verbatim from the API response.
 */

import { PriceRequestError, postPrice } from "./api.js";
import type { PriceResponseBody } from "./api.js";
import { DebouncedSubmitter } from "./debounce.js";
import {
  MONTH_NAMES,
  fingerprint,
  validateForm,
} from "./model.js";
import type { DateParts, FormState, OptionChoice, PriceRequestBody } from "./model.js";

export const DEBOUNCE_MS = 300;

const FIELD_TO_INPUT: Record<string, string> = {
  spot: "spot",
  strike: "strike",
  rate_pct: "rate",
  ratePct: "rate",
  vol_pct: "vol",
  volPct: "vol",
  purchase_date: "purchase-day",
  expiry_date: "expiry-day",
  expiry: "expiry-day",
};

function option(value: string, label: string): string {
  return `<option value="${value}">${label}</option>`;
}

function dateSelectors(prefix: string): string {
  const days = Array.from({ length: 31 }, (_, i) =>
    option(String(i + 1), String(i + 1)),
  ).join("");
  const months = MONTH_NAMES.map((name, i) => option(String(i + 1), name)).join("");
  const years = Array.from({ length: 41 }, (_, i) => 2000 + i)
    .map((y) => option(String(y), String(y)))
    .join("");
  return `
    <select id="${prefix}-day" aria-label="${prefix} day">${days}</select>
    <select id="${prefix}-month" aria-label="${prefix} month">${months}</select>
    <select id="${prefix}-year" aria-label="${prefix} year">${years}</select>
    <span class="field-error" data-field="${prefix}" hidden></span>`;
}

function formTemplate(): string {
  return `
  <h1>Options Premium Calculator</h1>
  <form id="calculator" autocomplete="off">
    <table class="form-grid">
      <tr>
        <td><label for="spot">Spot Price (Rs)</label></td>
        <td><input id="spot" type="text" inputmode="decimal">
            <span class="field-error" data-field="spot" hidden></span></td>
        <td><label for="strike">Strike Price (Rs)</label></td>
        <td><input id="strike" type="text" inputmode="decimal">
            <span class="field-error" data-field="strike" hidden></span></td>
      </tr>
      <tr>
        <td><label for="rate">Interest Rate (%)</label></td>
        <td><input id="rate" type="text" inputmode="decimal">
            <span class="field-error" data-field="rate" hidden></span></td>
        <td><label for="vol">Volatility (%)</label></td>
        <td><input id="vol" type="text" inputmode="decimal">
            <span class="field-error" data-field="vol" hidden></span></td>
      </tr>
      <tr>
        <td>Purchase Date</td>
        <td>${dateSelectors("purchase")}</td>
        <td>Expiry Date</td>
        <td>${dateSelectors("expiry")}</td>
      </tr>
      <tr>
        <td>Display</td>
        <td colspan="3">
          <label><input type="radio" name="display" value="call" checked> Call Option Price</label>
          <label><input type="radio" name="display" value="put"> Put Option Price</label>
        </td>
      </tr>
      <tr>
        <td colspan="4">
          <button id="results-btn" type="submit" disabled>Results</button>
        </td>
      </tr>
    </table>
  </form>
  <div id="violation-banner" class="banner violation" hidden></div>
  <div id="error-banner" class="banner error" hidden>
    <span id="error-message"></span>
    <button id="retry-btn" type="button">Retry</button>
  </div>
  <div id="result" hidden>
    <h2>Your Inputs</h2>
    <table id="inputs-table">
      <thead><tr>
        <th>Strike Price (Rs)</th><th>Spot Price (Rs)</th><th>Time (Days)</th>
        <th>Volatility (%)</th><th>Interest (%)</th><th>Type</th>
      </tr></thead>
      <tbody><tr>
        <td id="echo-strike"></td><td id="echo-spot"></td><td id="echo-days"></td>
        <td id="echo-vol"></td><td id="echo-rate"></td><td id="echo-type"></td>
      </tr></tbody>
    </table>
    <h2>Results</h2>
    <table id="results-table">
      <thead><tr><th>Price (Rs)</th></tr></thead>
      <tbody><tr><td id="price-cell"></td></tr></tbody>
    </table>
  </div>`;
}

export class Calculator {
  private readonly root: HTMLElement;
  private readonly submitter: DebouncedSubmitter;
  private hasResult = false;
  private lastSubmitted: string | null = null;

  constructor(root: HTMLElement, today: DateParts = { day: 6, month: 2, year: 2014 }) {
    this.root = root;
    root.innerHTML = formTemplate();
    // Programmatic defaults: attribute-based option selection is not
    // honored uniformly across DOM implementations.
    this.setDateSelectors("purchase", today);
    this.setDateSelectors("expiry", today);
    this.submitter = new DebouncedSubmitter(DEBOUNCE_MS, (signal) => this.submit(signal));
    this.wire();
    this.refreshValidity();
  }

  private setDateSelectors(prefix: string, parts: DateParts): void {
    this.select(`${prefix}-day`).value = String(parts.day);
    this.select(`${prefix}-month`).value = String(parts.month);
    this.select(`${prefix}-year`).value = String(parts.year);
  }

  private element<T extends HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private select(id: string): HTMLSelectElement {
    return this.element<HTMLSelectElement>(id);
  }

  readForm(): FormState {
    const parts = (prefix: string): DateParts => ({
      day: Number(this.select(`${prefix}-day`).value),
      month: Number(this.select(`${prefix}-month`).value),
      year: Number(this.select(`${prefix}-year`).value),
    });
    const radio = this.root.querySelector<HTMLInputElement>(
      'input[name="display"]:checked',
    );
    return {
      spot: this.element<HTMLInputElement>("spot").value,
      strike: this.element<HTMLInputElement>("strike").value,
      ratePct: this.element<HTMLInputElement>("rate").value,
      volPct: this.element<HTMLInputElement>("vol").value,
      purchase: parts("purchase"),
      expiry: parts("expiry"),
      optionType: (radio?.value ?? "call") as OptionChoice,
    };
  }

  private wire(): void {
    const form = this.element<HTMLFormElement>("calculator");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (validateForm(this.readForm()).ok) this.submitter.flush();
    });
    form.addEventListener("input", () => this.onFieldChange());
    form.addEventListener("change", () => this.onFieldChange());
    this.element<HTMLButtonElement>("retry-btn").addEventListener("click", () => {
      if (validateForm(this.readForm()).ok) this.submitter.flush();
    });
  }

  private onFieldChange(): void {
    const form = this.readForm();
    const verdict = this.refreshValidity(form);
    if (!verdict.ok || !this.hasResult) return;
    if (fingerprint(form) === this.lastSubmitted) return; // nothing changed
    this.submitter.trigger();
  }

  private refreshValidity(form: FormState = this.readForm()) {
    const verdict = validateForm(form);
    this.element<HTMLButtonElement>("results-btn").disabled = !verdict.ok;
    this.clearFieldErrors();
    return verdict;
  }

  private clearFieldErrors(): void {
    this.root.querySelectorAll<HTMLElement>(".field-error").forEach((node) => {
      node.hidden = true;
      node.textContent = "";
    });
  }

  private showFieldError(field: string, message: string): void {
    const inputId = FIELD_TO_INPUT[field];
    const slot =
      (inputId &&
        this.root.querySelector<HTMLElement>(
          `.field-error[data-field="${inputId.replace(/-day$/, "")}"]`,
        )) ||
      this.root.querySelector<HTMLElement>(`.field-error[data-field="${field}"]`);
    if (slot) {
      slot.textContent = message;
      slot.hidden = false;
    }
  }

  private banner(id: "violation-banner" | "error-banner", text: string | null): void {
    const node = this.element<HTMLElement>(id);
    if (text === null) {
      node.hidden = true;
      return;
    }
    if (id === "error-banner") {
      this.element<HTMLElement>("error-message").textContent = text;
    } else {
      node.textContent = text;
    }
    node.hidden = false;
  }

  private async submit(signal: AbortSignal): Promise<void> {
    const form = this.readForm();
    const verdict = validateForm(form);
    if (!verdict.ok) return;
    const body: PriceRequestBody = verdict.request;
    this.element<HTMLElement>("result").classList.add("stale");
    try {
      const response = await postPrice(body, signal);
      this.render(response, form.optionType);
      this.lastSubmitted = fingerprint(form);
    } catch (error) {
      if (!(error instanceof PriceRequestError)) throw error;
      const failure = error.failure;
      if (failure.kind === "aborted") return;
      this.element<HTMLElement>("result").classList.remove("stale");
      if (failure.kind === "fields") {
        this.clearFieldErrors();
        for (const fieldError of failure.errors) {
          this.showFieldError(fieldError.field, fieldError.message);
        }
      } else if (failure.kind === "network") {
        this.banner("error-banner", "Could not reach the pricing service.");
      } else {
        this.banner("error-banner", `Pricing failed (${failure.status}).`);
      }
    }
  }

  private render(response: PriceResponseBody, chosen: OptionChoice): void {
    this.banner("error-banner", null);
    this.banner("violation-banner", null);
    if (response.price < 0) {
      // The service guarantees nonnegative prices; surface any breach.
      this.banner(
        "violation-banner",
        `Contract violation: the service returned a negative price (${response.price_display}).`,
      );
      this.element<HTMLElement>("result").classList.remove("stale");
      return;
    }
    const echo = response.inputs;
    this.element<HTMLElement>("echo-strike").textContent = String(echo.strike);
    this.element<HTMLElement>("echo-spot").textContent = String(echo.spot);
    this.element<HTMLElement>("echo-days").textContent = String(echo.time_days);
    this.element<HTMLElement>("echo-vol").textContent = String(echo.vol_pct);
    this.element<HTMLElement>("echo-rate").textContent = String(echo.rate_pct);
    this.element<HTMLElement>("echo-type").textContent =
      chosen === "call" ? "Call Option" : "Put Option";
    this.element<HTMLElement>("price-cell").textContent = response.price_display;
    const result = this.element<HTMLElement>("result");
    result.hidden = false;
    result.classList.remove("stale");
    this.hasResult = true;
  }
}
