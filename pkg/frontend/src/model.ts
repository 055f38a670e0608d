/**
 * Pure form logic: parsing, validation, and request construction.
 * No DOM access here so every rule is unit-testable.
 */

export type OptionChoice = "call" | "put";

export interface DateParts {
  day: number;
  month: number; // 1-12
  year: number;
}

export interface FormState {
  spot: string;
  strike: string;
  ratePct: string;
  volPct: string;
  purchase: DateParts;
  expiry: DateParts;
  optionType: OptionChoice;
}

export interface PriceRequestBody {
  option_type: OptionChoice;
  spot: number;
  strike: number;
  rate_pct: number;
  vol_pct: number;
  purchase_date: string;
  expiry_date: string;
  // method omitted on purpose: the server defaults to the closed form.
}

export type FieldName = "spot" | "strike" | "ratePct" | "volPct" | "expiry";

export interface ValidationFailure {
  ok: false;
  problems: Partial<Record<FieldName, string>>;
}

export interface ValidationSuccess {
  ok: true;
  request: PriceRequestBody;
}

export const MONTH_NAMES = [
  "Jan", "Feb", "Mar", "Apr", "May", "Jun",
  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
] as const;

export function parseNumeric(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}

export function isRealDate(parts: DateParts): boolean {
  const probe = new Date(Date.UTC(parts.year, parts.month - 1, parts.day));
  return (
    probe.getUTCFullYear() === parts.year &&
    probe.getUTCMonth() === parts.month - 1 &&
    probe.getUTCDate() === parts.day
  );
}

export function toIsoDate(parts: DateParts): string {
  const mm = String(parts.month).padStart(2, "0");
  const dd = String(parts.day).padStart(2, "0");
  return `${parts.year}-${mm}-${dd}`;
}

function utcMillis(parts: DateParts): number {
  return Date.UTC(parts.year, parts.month - 1, parts.day);
}

export function validateForm(form: FormState): ValidationSuccess | ValidationFailure {
  const problems: ValidationFailure["problems"] = {};

  const spot = parseNumeric(form.spot);
  const strike = parseNumeric(form.strike);
  const ratePct = parseNumeric(form.ratePct);
  const volPct = parseNumeric(form.volPct);
  if (spot === null) problems.spot = "Enter a numeric spot price";
  if (strike === null) problems.strike = "Enter a numeric strike price";
  if (ratePct === null) problems.ratePct = "Enter a numeric interest rate";
  if (volPct === null) problems.volPct = "Enter a numeric volatility";

  if (!isRealDate(form.purchase) || !isRealDate(form.expiry)) {
    problems.expiry = "Pick real calendar dates";
  } else if (utcMillis(form.expiry) <= utcMillis(form.purchase)) {
    problems.expiry = "Expiry must fall after the purchase date";
  }

  if (Object.keys(problems).length > 0) {
    return { ok: false, problems };
  }
  return {
    ok: true,
    request: {
      option_type: form.optionType,
      spot: spot as number,
      strike: strike as number,
      rate_pct: ratePct as number,
      vol_pct: volPct as number,
      purchase_date: toIsoDate(form.purchase),
      expiry_date: toIsoDate(form.expiry),
    },
  };
}

/** Stable serialization used to skip resubmits when nothing changed. */
export function fingerprint(form: FormState): string {
  return JSON.stringify([
    form.spot, form.strike, form.ratePct, form.volPct,
    toIsoDate(form.purchase), toIsoDate(form.expiry), form.optionType,
  ]);
}
