import { Calculator } from "./view.js";

function today(): { day: number; month: number; year: number } {
  const now = new Date();
  return { day: now.getDate(), month: now.getMonth() + 1, year: now.getFullYear() };
}

const root = document.getElementById("app");
if (root) {
  new Calculator(root, today());
}
